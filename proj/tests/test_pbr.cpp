#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ontic/linprog.hpp"
#include "ontic/pbr.hpp"
#include "support.hpp"

using namespace ontic;
using namespace ontic::pbr;
using support::kind_of;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

// Basis and product states written out by hand as 4-vectors in |00>,|01>,|10>,|11> order.
std::array<std::array<double, 4>, 4> hand_basis() {
    const double h = 0.5;
    return {{
        {0, kR, kR, 0},       // (|01> + |10>)/sqrt2
        {h, -h, h, h},        // (|0-> + |1+>)/sqrt2
        {h, h, -h, h},        // (|+1> + |-0>)/sqrt2
        {kR, 0, 0, -kR},      // (|+-> + |-+>)/sqrt2
    }};
}

std::array<std::array<double, 4>, 4> hand_preparations() {
    return {{
        {1, 0, 0, 0},
        {kR, kR, 0, 0},
        {kR, 0, kR, 0},
        {0.5, 0.5, 0.5, 0.5},
    }};
}

Ket random_qubit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> a = {{g(rng), g(rng)}, {g(rng), g(rng)}};
    const double n = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
    for (auto& v : a) v /= n;
    return Ket(a);
}

// Independent minimum of the forbidden mass for the overlap family: an LP built
// directly from the hand-written tables over the 9 joint cells.
double oracle_min_forbidden(double q) {
    const std::array<double, 3> mu0 = {1 - q, q, 0};
    const std::array<double, 3> mup = {0, q, 1 - q};
    const std::array<const std::array<double, 3>*, 4> first = {&mu0, &mu0, &mup, &mup};
    const std::array<const std::array<double, 3>*, 4> second = {&mu0, &mup, &mu0, &mup};
    const std::size_t n = 36 + 1;
    lp::Problem p;
    p.objective.assign(n, 0.0);
    p.objective[36] = 1.0;
    for (std::size_t c = 0; c < 9; ++c) {
        lp::Constraint row{std::vector<double>(n, 0.0), lp::Relation::Equal, 1.0};
        for (std::size_t k = 0; k < 4; ++k) row.coeffs[k * 9 + c] = 1.0;
        p.constraints.push_back(row);
    }
    // Preparation k is annihilated by outcome k.
    for (std::size_t k = 0; k < 4; ++k) {
        lp::Constraint row{std::vector<double>(n, 0.0), lp::Relation::LessEqual, 0.0};
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) row.coeffs[k * 9 + a * 3 + b] = (*first[k])[a] * (*second[k])[b];
        row.coeffs[36] = -1.0;
        p.constraints.push_back(row);
    }
    return lp::minimize(p).objective;
}

}  // namespace

TEST(Ket, BasicsAndErrors) {
    EXPECT_NEAR(std::abs(inner(zero(), zero()) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner(zero(), one())), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner(plus(), minus())), 0.0, 1e-15);
    const Ket t = tensor(plus(), minus());
    EXPECT_EQ(t.dim(), 4u);
    EXPECT_NEAR(std::abs(inner(t, t) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_EQ(kind_of([] { Ket({{1.0, 0.0}, {1.0, 0.0}}); }), ErrorKind::NormalizationError);
    EXPECT_EQ(kind_of([] { inner(zero(), tensor(zero(), zero())); }), ErrorKind::DimensionMismatch);
    // Conjugate-linear in the first argument.
    const Ket i_plus({{0.0, kR}, {0.0, kR}});
    EXPECT_NEAR(std::abs(inner(i_plus, plus()) - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(MeasurementBasis, BornAndErrors) {
    const MeasurementBasis z({zero(), one()});
    const auto p = born_prob(plus(), z);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
    EXPECT_EQ(kind_of([] { MeasurementBasis({zero(), plus()}); }), ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { MeasurementBasis({zero()}); }), ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([&] { born_prob(tensor(zero(), zero()), z); }), ErrorKind::DimensionMismatch);
}

TEST(PbrBasis, MatchesHandWrittenVectors) {
    const auto basis = pbr_basis();
    const auto hand = hand_basis();
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(basis.vectors()[k][i] - Complex(hand[k][i])), 0.0, 1e-15);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            EXPECT_NEAR(std::abs(inner(basis.vectors()[a], basis.vectors()[b]) - Complex(a == b ? 1.0 : 0.0)), 0.0,
                        1e-12);
}

TEST(PbrBasis, AnnihilationPattern) {
    const auto hand_b = hand_basis();
    const auto hand_p = hand_preparations();
    const auto table = quantum_targets();
    for (std::size_t p = 0; p < 4; ++p) {
        double row = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            double amp = 0.0;
            for (std::size_t i = 0; i < 4; ++i) amp += hand_b[k][i] * hand_p[p][i];
            EXPECT_NEAR(table[p][k], amp * amp, 1e-15);
            row += table[p][k];
        }
        EXPECT_NEAR(row, 1.0, 1e-12);
        EXPECT_LE(table[p][p], 1e-12);
    }
    const auto forbidden = forbidden_pairs(table);
    EXPECT_EQ(forbidden, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
}

TEST(PbrBasis, CompletenessOnRandomProducts) {
    std::mt19937_64 rng(99);
    const auto basis = pbr_basis();
    for (int i = 0; i < 100; ++i) {
        const auto p = born_prob(tensor(random_qubit(rng), random_qubit(rng)), basis);
        EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-12);
    }
}

TEST(OverlapFamily, MassEqualsQ) {
    for (double q : {0.0, 0.3, 1.0}) {
        const OverlapFamily f{q};
        const auto r = ontology::overlap_classify(f.space(), f.mu_zero(), f.mu_plus());
        EXPECT_NEAR(r.overlap_mass, q, 1e-15);
        EXPECT_EQ(r.overlap_class == ontology::OverlapClass::None, q == 0.0);
    }
}

TEST(ProductModel, OuterProductsAndTargets) {
    const auto pm = product_model(OverlapFamily{0.3});
    ASSERT_EQ(pm.joint.lambda.size(), 9u);
    ASSERT_EQ(pm.joint.preparations.size(), 4u);
    const auto& s = pm.single.preparations;
    const std::array<std::pair<int, int>, 4> pairs = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    for (std::size_t p = 0; p < 4; ++p) {
        EXPECT_EQ(pm.joint.preparations[p].name, kPreparationNames[p]);
        double total = 0.0;
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const double v = pm.joint.preparations[p].mu[a * 3 + b];
                EXPECT_EQ(v, s[static_cast<std::size_t>(pairs[p].first)].mu[a] *
                                 s[static_cast<std::size_t>(pairs[p].second)].mu[b]);
                total += v;
            }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
    EXPECT_EQ(kind_of([] { product_model(OverlapFamily{1.5}); }), ErrorKind::DomainError);
}

TEST(PsiOnticJoint, ReproducesTargetsExactly) {
    // Point masses on the four preparations, responses equal to the Born rows.
    const auto table = quantum_targets();
    ontology::OntModel m;
    ontology::ResponseFunction r{"pbr", {}, std::vector<std::vector<double>>(4, std::vector<double>(4))};
    ontology::BornTargets targets;
    for (std::size_t p = 0; p < 4; ++p) {
        m.lambda.labels.push_back(kPreparationNames[p]);
        r.outcomes.push_back(kOutcomeNames[p]);
        std::vector<double> mu(4, 0.0);
        mu[p] = 1.0;
        m.preparations.push_back({kPreparationNames[p], mu});
        for (std::size_t k = 0; k < 4; ++k) r.xi[k][p] = table[p][k];
        targets[kPreparationNames[p]]["pbr"] = std::vector<double>(table[p].begin(), table[p].end());
    }
    m.measurements.push_back(r);
    m.born_targets = targets;
    EXPECT_TRUE(ontology::validate(m).ok());
    EXPECT_EQ(ontology::born_deviation(m).max_deviation, 0.0);
}

TEST(MinForbidden, DisjointSupportsAdmitExactModel) {
    const auto r = min_forbidden_probability(0.0, 50);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(ontology::validate(r.model).ok());
    EXPECT_LE(ontology::born_deviation(r.model).max_deviation, 1e-10);
    EXPECT_EQ(min_forbidden_probability(0.0, 50, Optimizer::GridDescent).value, 0.0);
}

TEST(MinForbidden, FullOverlap) {
    const auto r = min_forbidden_probability(1.0, 50);
    EXPECT_GE(r.value, 0.25 - 1e-12);
    EXPECT_NEAR(r.value, 0.25, 1e-12);
}

TEST(MinForbidden, AgreesWithOracleLp) {
    for (int i = 0; i <= 20; ++i) {
        const double q = i / 20.0;
        const double value = min_forbidden_probability(q, 50).value;
        EXPECT_NEAR(value, oracle_min_forbidden(q), 1e-12) << q;
        EXPECT_NEAR(value, q * q / 4.0, 1e-12) << q;
    }
}

TEST(MinForbidden, MonotoneAndBounded) {
    double previous = -1.0;
    for (int i = 1; i <= 10; ++i) {
        const double q = i / 10.0;
        const double v = min_forbidden_probability(q, 50).value;
        EXPECT_GE(v, q * q / 4.0 - 1e-6);
        EXPECT_GE(v, previous);
        previous = v;
    }
}

TEST(MinForbidden, GridFallbackBoundsLp) {
    const int resolution = 50;
    for (double q : {0.0, 0.5, 1.0}) {
        const double lp = min_forbidden_probability(q, resolution).value;
        const auto grid = min_forbidden_probability(q, resolution, Optimizer::GridDescent);
        EXPECT_GE(grid.value, lp - 1e-12) << q;
        EXPECT_LE(grid.value - lp, q * q / resolution + 1e-12) << q;
        EXPECT_TRUE(ontology::validate(grid.model).ok());
    }
}

TEST(MinForbidden, Errors) {
    EXPECT_EQ(kind_of([] { min_forbidden_probability(-0.1, 50); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { min_forbidden_probability(1.1, 50); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { min_forbidden_probability(0.5, 0, Optimizer::GridDescent); }), ErrorKind::DomainError);
}

TEST(Tradeoff, ShapeAndInverse) {
    const std::vector<double> eps = {0.0, 0.01, 0.0625, 0.1, 0.2, 0.25, 0.5};
    const auto curve = epsilon_overlap_tradeoff(eps, 50);
    ASSERT_EQ(curve.size(), eps.size());
    EXPECT_EQ(curve[0].q_max, 0.0);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].q_max, curve[i - 1].q_max);
    EXPECT_GE(curve[2].q_max, 0.5);
    for (const auto& pt : curve) {
        const double inverse = std::min(1.0, 2.0 * std::sqrt(pt.eps));
        EXPECT_LE(pt.q_max, inverse + 1e-12);
        EXPECT_GE(pt.q_max, inverse - 1e-6);
    }
}

TEST(Cat, EqualSuperposition) {
    const auto cat = cat_fixture({kR, 0}, {kR, 0});
    const auto* sup = cat.model.find_preparation("superposition");
    ASSERT_NE(sup, nullptr);
    const auto probs = ontology::outcome_probabilities(*sup, *cat.model.find_measurement(kAliveDead));
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    ASSERT_EQ(cat.overlaps.size(), 3u);
    for (const auto& o : cat.overlaps) EXPECT_EQ(o.report.overlap_class, ontology::OverlapClass::None);
    EXPECT_TRUE(ontology::validate(cat.model).ok());
    EXPECT_EQ(ontology::born_deviation(cat.model).max_deviation, 0.0);
    EXPECT_EQ(ontology::information_class(cat.model).verdict, ontology::InformationVerdict::NonMinimal);
}

TEST(Cat, DegenerateEdge) {
    const auto cat = cat_fixture({1, 0}, {0, 0});
    const auto& targets = *cat.model.born_targets;
    EXPECT_EQ(targets.at("superposition").at(kAliveDead), targets.at("cat+ atom-e").at(kAliveDead));
    for (const auto& o : cat.overlaps) EXPECT_EQ(o.report.overlap_class, ontology::OverlapClass::None);
    EXPECT_TRUE(ontology::validate(cat.model).ok());
}

TEST(Cat, RandomAmplitudes) {
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> g;
    for (int i = 0; i < 20; ++i) {
        Complex a{g(rng), g(rng)};
        Complex b{g(rng), g(rng)};
        const double n = std::sqrt(std::norm(a) + std::norm(b));
        a /= n;
        b /= n;
        const auto cat = cat_fixture(a, b);
        const auto probs =
            ontology::outcome_probabilities(*cat.model.find_preparation("superposition"), *cat.model.find_measurement(kAliveDead));
        EXPECT_NEAR(probs[0], std::norm(a), 1e-12);
        EXPECT_NEAR(probs[1], std::norm(b), 1e-12);
        EXPECT_EQ(ontology::born_deviation(cat.model).max_deviation, 0.0);
    }
    EXPECT_EQ(kind_of([] { cat_fixture({1, 0}, {1, 0}); }), ErrorKind::NormalizationError);
}
