#include "ontic/pbr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ontic/error.hpp"
#include "ontic/format.hpp"
#include "ontic/linprog.hpp"

namespace ontic::pbr {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kForbiddenThreshold = 1e-12;

double norm_squared(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
}

}  // namespace

Ket::Ket(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw Error(ErrorKind::DimensionMismatch, "ket must have dimension >= 1");
    const double n2 = norm_squared(amplitudes_);
    if (std::abs(n2 - 1.0) > kUnitTolerance)
        throw Error(ErrorKind::NormalizationError, "ket has squared norm " + format_real(n2));
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw Error(ErrorKind::DimensionMismatch, "basis index out of range");
    std::vector<Complex> v(dim, 0.0);
    v[index] = 1.0;
    return Ket(std::move(v));
}

Complex inner(const Ket& a, const Ket& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "inner product of kets of different dimension");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Ket tensor(const Ket& a, const Ket& b) {
    std::vector<Complex> v;
    v.reserve(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) v.push_back(a[i] * b[j]);
    return Ket(std::move(v));
}

Ket zero() { return Ket::basis(2, 0); }
Ket one() { return Ket::basis(2, 1); }
Ket plus() { return Ket({M_SQRT1_2, M_SQRT1_2}); }
Ket minus() { return Ket({M_SQRT1_2, -M_SQRT1_2}); }

MeasurementBasis::MeasurementBasis(std::vector<Ket> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw Error(ErrorKind::DimensionMismatch, "empty measurement basis");
    const std::size_t d = vectors_.front().dim();
    if (vectors_.size() != d)
        throw Error(ErrorKind::DimensionMismatch, "basis needs exactly dim vectors");
    for (std::size_t i = 0; i < d; ++i) {
        if (vectors_[i].dim() != d) throw Error(ErrorKind::DimensionMismatch, "basis vectors differ in dimension");
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(inner(vectors_[i], vectors_[j])) > kUnitTolerance)
                throw Error(ErrorKind::DimensionMismatch, "basis vectors are not orthogonal");
        }
    }
}

std::vector<double> born_prob(const Ket& state, const MeasurementBasis& basis) {
    if (state.dim() != basis.dim()) throw Error(ErrorKind::DimensionMismatch, "state and basis dimensions differ");
    std::vector<double> p;
    p.reserve(basis.dim());
    for (const auto& v : basis.vectors()) p.push_back(std::norm(inner(v, state)));
    return p;
}

namespace {

Ket superpose(const Ket& a, const Ket& b) {
    std::vector<Complex> v(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) v[i] = (a[i] + b[i]) * M_SQRT1_2;
    return Ket(std::move(v));
}

}  // namespace

MeasurementBasis pbr_basis() {
    return MeasurementBasis({
        superpose(tensor(zero(), one()), tensor(one(), zero())),
        superpose(tensor(zero(), minus()), tensor(one(), plus())),
        superpose(tensor(plus(), one()), tensor(minus(), zero())),
        superpose(tensor(plus(), minus()), tensor(minus(), plus())),
    });
}

std::array<Ket, 4> product_preparations() {
    return {tensor(zero(), zero()), tensor(zero(), plus()), tensor(plus(), zero()), tensor(plus(), plus())};
}

QuantumTable quantum_targets() {
    const auto basis = pbr_basis();
    const auto preps = product_preparations();
    QuantumTable table{};
    for (std::size_t p = 0; p < 4; ++p) {
        const auto probs = born_prob(preps[p], basis);
        std::copy(probs.begin(), probs.end(), table[p].begin());
    }
    return table;
}

std::vector<std::pair<std::size_t, std::size_t>> forbidden_pairs(const QuantumTable& table) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t k = 0; k < 4; ++k)
            if (table[p][k] < kForbiddenThreshold) out.emplace_back(p, k);
    return out;
}

ontology::LambdaSpace OverlapFamily::space() const { return {{"lambda_A", "lambda_B", "lambda_C"}}; }
ontology::EpistemicState OverlapFamily::mu_zero() const { return {"0", {1.0 - q, q, 0.0}}; }
ontology::EpistemicState OverlapFamily::mu_plus() const { return {"+", {0.0, q, 1.0 - q}}; }

ProductModel product_model(const OverlapFamily& family) {
    if (!(family.q >= 0.0 && family.q <= 1.0))
        throw Error(ErrorKind::DomainError, "overlap parameter q = " + format_real(family.q) + " outside [0, 1]");
    ProductModel out;
    out.single.lambda = family.space();
    out.single.preparations = {family.mu_zero(), family.mu_plus()};

    const auto& labels = out.single.lambda.labels;
    for (const auto& a : labels)
        for (const auto& b : labels) out.joint.lambda.labels.push_back("(" + a + "," + b + ")");

    const std::array<const ontology::EpistemicState*, 2> singles = {&out.single.preparations[0],
                                                                   &out.single.preparations[1]};
    const auto table = quantum_targets();
    ontology::BornTargets targets;
    for (std::size_t p = 0; p < 4; ++p) {
        const auto& first = *singles[p / 2];
        const auto& second = *singles[p % 2];
        ontology::EpistemicState joint{kPreparationNames[p], {}};
        for (double x : first.mu)
            for (double y : second.mu) joint.mu.push_back(x * y);
        out.joint.preparations.push_back(std::move(joint));
        targets[kPreparationNames[p]]["pbr"] = std::vector<double>(table[p].begin(), table[p].end());
    }
    out.joint.born_targets = std::move(targets);
    return out;
}

namespace {

constexpr std::size_t kCells = 9;
constexpr std::size_t kOutcomes = 4;

using Weights = std::array<std::array<double, kCells>, 4>;  // [preparation][cell]
using Response = std::array<std::array<double, kCells>, kOutcomes>;

Weights joint_weights(const ProductModel& pm) {
    Weights w{};
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t c = 0; c < kCells; ++c) w[p][c] = pm.joint.preparations[p].mu[c];
    return w;
}

double max_forbidden(const Weights& w, const Response& xi,
                     const std::vector<std::pair<std::size_t, std::size_t>>& forbidden) {
    double worst = 0.0;
    for (const auto& [p, k] : forbidden) {
        double s = 0.0;
        for (std::size_t c = 0; c < kCells; ++c) s += w[p][c] * xi[k][c];
        worst = std::max(worst, s);
    }
    return worst;
}

std::size_t var(std::size_t k, std::size_t c) { return k * kCells + c; }

lp::Problem base_problem(std::size_t extra) {
    lp::Problem prob;
    prob.objective.assign(kOutcomes * kCells + extra, 0.0);
    // Each cell's responses form a probability vector.
    for (std::size_t c = 0; c < kCells; ++c) {
        lp::Constraint row{std::vector<double>(prob.objective.size(), 0.0), lp::Relation::Equal, 1.0};
        for (std::size_t k = 0; k < kOutcomes; ++k) row.coeffs[var(k, c)] = 1.0;
        prob.constraints.push_back(std::move(row));
    }
    return prob;
}

Response response_from(const std::vector<double>& x) {
    Response xi{};
    for (std::size_t k = 0; k < kOutcomes; ++k)
        for (std::size_t c = 0; c < kCells; ++c) xi[k][c] = std::clamp(x[var(k, c)], 0.0, 1.0);
    // Renormalize columns against round-off in the pivots.
    for (std::size_t c = 0; c < kCells; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < kOutcomes; ++k) s += xi[k][c];
        for (std::size_t k = 0; k < kOutcomes; ++k) xi[k][c] /= s;
    }
    return xi;
}

lp::Solution solve_or_throw(const lp::Problem& prob, const char* what) {
    auto sol = lp::minimize(prob);
    if (sol.status != lp::Status::Optimal)
        throw Error(ErrorKind::NoConvergence, std::string("linear program failed: ") + what);
    return sol;
}

Response solve_lp(const Weights& w, const QuantumTable& table,
                  const std::vector<std::pair<std::size_t, std::size_t>>& forbidden) {
    // Stage 1: min t with every forbidden probability <= t.
    const std::size_t t_var = kOutcomes * kCells;
    auto stage1 = base_problem(1);
    stage1.objective[t_var] = 1.0;
    for (const auto& [p, k] : forbidden) {
        lp::Constraint row{std::vector<double>(stage1.objective.size(), 0.0), lp::Relation::LessEqual, 0.0};
        for (std::size_t c = 0; c < kCells; ++c) row.coeffs[var(k, c)] = w[p][c];
        row.coeffs[t_var] = -1.0;
        stage1.constraints.push_back(std::move(row));
    }
    const auto s1 = solve_or_throw(stage1, "forbidden-mass minimization");
    const double best = max_forbidden(w, response_from(s1.x), forbidden);

    // Stage 2: among responses that keep the forbidden mass at the optimum,
    // the one closest (max norm) to every Born target.
    const std::size_t d_var = kOutcomes * kCells;
    auto stage2 = base_problem(1);
    stage2.objective[d_var] = 1.0;
    for (const auto& [p, k] : forbidden) {
        lp::Constraint row{std::vector<double>(stage2.objective.size(), 0.0), lp::Relation::LessEqual,
                           best + 1e-12};
        for (std::size_t c = 0; c < kCells; ++c) row.coeffs[var(k, c)] = w[p][c];
        stage2.constraints.push_back(std::move(row));
    }
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t k = 0; k < kOutcomes; ++k) {
            lp::Constraint up{std::vector<double>(stage2.objective.size(), 0.0), lp::Relation::LessEqual,
                              table[p][k]};
            lp::Constraint down{std::vector<double>(stage2.objective.size(), 0.0), lp::Relation::LessEqual,
                                -table[p][k]};
            for (std::size_t c = 0; c < kCells; ++c) {
                up.coeffs[var(k, c)] = w[p][c];
                down.coeffs[var(k, c)] = -w[p][c];
            }
            up.coeffs[d_var] = -1.0;
            down.coeffs[d_var] = -1.0;
            stage2.constraints.push_back(std::move(up));
            stage2.constraints.push_back(std::move(down));
        }
    }
    auto s2 = lp::minimize(stage2);
    if (s2.status != lp::Status::Optimal) return response_from(s1.x);
    const auto xi2 = response_from(s2.x);
    // Keep stage 1 if round-off in stage 2 pushed the forbidden mass up.
    if (max_forbidden(w, xi2, forbidden) > best + 1e-12) return response_from(s1.x);
    return xi2;
}

Response solve_grid(const Weights& w, const std::vector<std::pair<std::size_t, std::size_t>>& forbidden,
                    int resolution) {
    if (resolution < 1) throw Error(ErrorKind::DomainError, "grid resolution must be positive");
    const auto r = static_cast<std::size_t>(resolution);
    std::vector<std::array<double, kOutcomes>> grid;
    for (std::size_t a = 0; a <= r; ++a)
        for (std::size_t b = 0; a + b <= r; ++b)
            for (std::size_t c = 0; a + b + c <= r; ++c) {
                const double d = static_cast<double>(r);
                grid.push_back({a / d, b / d, c / d, static_cast<double>(r - a - b - c) / d});
            }

    // Start every cell at the grid point nearest the uniform response.
    std::array<double, kOutcomes> start{};
    for (std::size_t k = 0; k < kOutcomes; ++k)
        start[k] = static_cast<double>(r / kOutcomes + (k < r % kOutcomes ? 1 : 0)) / static_cast<double>(r);
    Response xi{};
    for (std::size_t c = 0; c < kCells; ++c)
        for (std::size_t k = 0; k < kOutcomes; ++k) xi[k][c] = start[k];

    std::vector<double> totals(forbidden.size(), 0.0);
    for (std::size_t f = 0; f < forbidden.size(); ++f) {
        const auto [p, k] = forbidden[f];
        for (std::size_t c = 0; c < kCells; ++c) totals[f] += w[p][c] * xi[k][c];
    }

    // Lexicographic score (largest forbidden probability, then their sum).
    const auto score = [&](std::size_t cell, const std::array<double, kOutcomes>& cand) {
        double worst = 0.0;
        double sum = 0.0;
        for (std::size_t f = 0; f < forbidden.size(); ++f) {
            const auto [p, k] = forbidden[f];
            const double v = totals[f] + w[p][cell] * cand[k];
            worst = std::max(worst, v);
            sum += v;
        }
        return std::pair{worst, sum};
    };

    for (int sweep = 0; sweep < 100; ++sweep) {
        bool changed = false;
        for (std::size_t cell = 0; cell < kCells; ++cell) {
            std::array<double, kOutcomes> current{};
            for (std::size_t k = 0; k < kOutcomes; ++k) current[k] = xi[k][cell];
            for (std::size_t f = 0; f < forbidden.size(); ++f)
                totals[f] -= w[forbidden[f].first][cell] * current[forbidden[f].second];

            auto best = current;
            auto best_score = score(cell, current);
            for (const auto& cand : grid) {
                const auto s = score(cell, cand);
                const bool better = s.first < best_score.first - 1e-15 ||
                                    (s.first <= best_score.first + 1e-15 && s.second < best_score.second - 1e-15);
                if (better) {
                    best = cand;
                    best_score = s;
                }
            }
            if (best != current) changed = true;
            for (std::size_t k = 0; k < kOutcomes; ++k) xi[k][cell] = best[k];
            for (std::size_t f = 0; f < forbidden.size(); ++f)
                totals[f] += w[forbidden[f].first][cell] * best[forbidden[f].second];
        }
        if (!changed) break;
    }
    return xi;
}

}  // namespace

ForbiddenResult min_forbidden_probability(double q, int resolution, Optimizer optimizer) {
    if (!(q >= 0.0 && q <= 1.0))
        throw Error(ErrorKind::DomainError, "overlap parameter q = " + format_real(q) + " outside [0, 1]");
    auto pm = product_model(OverlapFamily{q});
    const auto table = quantum_targets();
    const auto forbidden = forbidden_pairs(table);
    const auto w = joint_weights(pm);

    const Response xi = optimizer == Optimizer::LinearProgram ? solve_lp(w, table, forbidden)
                                                              : solve_grid(w, forbidden, resolution);

    ForbiddenResult out;
    out.value = max_forbidden(w, xi, forbidden);
    out.witness.name = "pbr";
    out.witness.outcomes.assign(kOutcomeNames.begin(), kOutcomeNames.end());
    for (std::size_t k = 0; k < kOutcomes; ++k) out.witness.xi.emplace_back(xi[k].begin(), xi[k].end());
    out.model = std::move(pm.joint);
    out.model.measurements.push_back(out.witness);
    return out;
}

std::vector<TradeoffPoint> epsilon_overlap_tradeoff(std::span<const double> eps_grid, int resolution,
                                                    Optimizer optimizer) {
    constexpr double kWidth = 1e-6;
    constexpr double kSlack = 1e-14;
    const auto feasible = [&](double q, double eps) {
        return min_forbidden_probability(q, resolution, optimizer).value <= eps + kSlack;
    };
    std::vector<TradeoffPoint> curve;
    curve.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        if (!(eps >= 0.0 && eps <= 1.0))
            throw Error(ErrorKind::DomainError, "eps = " + format_real(eps) + " outside [0, 1]");
        if (feasible(1.0, eps)) {
            curve.push_back({eps, 1.0});
            continue;
        }
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > kWidth) {
            const double mid = 0.5 * (lo + hi);
            if (feasible(mid, eps)) lo = mid;
            else hi = mid;
        }
        curve.push_back({eps, lo});
    }
    return curve;
}

CatModel cat_fixture(Complex a, Complex b) {
    const double n2 = std::norm(a) + std::norm(b);
    if (std::abs(n2 - 1.0) > kUnitTolerance)
        throw Error(ErrorKind::NormalizationError, "|a|^2 + |b|^2 = " + format_real(n2));

    // Cat (alive |0>, dead |1>) tensor atom (excited |0>, decayed |1>).
    const Ket alive_excited = tensor(zero(), zero());
    const Ket dead_decayed = tensor(one(), one());
    std::vector<Complex> sup(4);
    for (std::size_t i = 0; i < 4; ++i) sup[i] = a * alive_excited[i] + b * dead_decayed[i];
    const Ket superposed(std::move(sup));

    const MeasurementBasis computational({Ket::basis(4, 0), Ket::basis(4, 1), Ket::basis(4, 2), Ket::basis(4, 3)});
    // alive/dead coarse-grains the computational outcomes by the cat factor.
    const auto alive_dead = [&](const Ket& k) {
        const auto p = born_prob(k, computational);
        return std::vector<double>{p[0] + p[1], p[2] + p[3]};
    };

    const std::array<std::pair<const char*, const Ket*>, 3> blocks = {{
        {"cat+ atom-e", &alive_excited},
        {"cat- atom-d", &dead_decayed},
        {"superposition", &superposed},
    }};
    const std::array<const char*, 3> labels = {"lambda_cat+_atom-e", "lambda_cat-_atom-d", "lambda_prime"};

    CatModel out;
    auto& model = out.model;
    model.lambda.labels.assign(labels.begin(), labels.end());
    ontology::ResponseFunction meas{kAliveDead, {"alive", "dead"}, {std::vector<double>(3), std::vector<double>(3)}};
    ontology::BornTargets targets;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        ontology::EpistemicState prep{blocks[i].first, std::vector<double>(3, 0.0)};
        prep.mu[i] = 1.0;
        model.preparations.push_back(std::move(prep));
        const auto probs = alive_dead(*blocks[i].second);
        meas.xi[0][i] = probs[0];
        meas.xi[1][i] = probs[1];
        targets[blocks[i].first][kAliveDead] = probs;
    }
    model.measurements.push_back(std::move(meas));
    model.born_targets = std::move(targets);

    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            out.overlaps.push_back({model.preparations[i].name, model.preparations[j].name,
                                    ontology::overlap_classify(model.lambda, model.preparations[i],
                                                               model.preparations[j])});
    return out;
}

}  // namespace ontic::pbr
