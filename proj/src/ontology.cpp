#include "ontic/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ontic/error.hpp"
#include "ontic/format.hpp"

namespace ontic::ontology {

std::optional<std::size_t> LambdaSpace::index_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

const EpistemicState* OntModel::find_preparation(const std::string& name) const {
    for (const auto& p : preparations)
        if (p.name == name) return &p;
    return nullptr;
}

const ResponseFunction* OntModel::find_measurement(const std::string& name) const {
    for (const auto& m : measurements)
        if (m.name == name) return &m;
    return nullptr;
}

namespace {

class ReportBuilder {
public:
    void add(std::string code, std::string location, double value, double deviation, std::string message) {
        report_.issues.push_back({std::move(code), std::move(location), value, deviation, std::move(message)});
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

void check_distribution(ReportBuilder& out, const std::string& code, const std::string& where,
                        const std::vector<double>& values) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v) || v < 0.0) {
            out.add("negative_entry", where + "[" + std::to_string(i) + "]", v, -v,
                    "entry must be a finite non-negative probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kNormTolerance)
        out.add(code, where, sum, sum - 1.0, "sums to " + format_real(sum) + ", expected 1");
}

}  // namespace

ValidationReport validate(const OntModel& model) {
    ReportBuilder out;
    const std::size_t n_lambda = model.lambda.size();

    if (n_lambda == 0) out.add("empty_lambda", "lambda", 0.0, 0.0, "lambda space is empty");
    std::set<std::string> seen;
    for (const auto& l : model.lambda.labels)
        if (!seen.insert(l).second) out.add("duplicate_label", "lambda." + l, 0.0, 0.0, "duplicate lambda label");

    std::set<std::string> prep_names;
    for (const auto& p : model.preparations) {
        const std::string where = "preparations." + p.name;
        if (!prep_names.insert(p.name).second) out.add("duplicate_name", where, 0.0, 0.0, "duplicate preparation");
        if (p.mu.size() != n_lambda) {
            out.add("dimension", where + ".mu", static_cast<double>(p.mu.size()),
                    static_cast<double>(p.mu.size()) - static_cast<double>(n_lambda),
                    "mu has " + std::to_string(p.mu.size()) + " entries for " +
                        std::to_string(n_lambda) + " ontic states");
            continue;
        }
        check_distribution(out, "mu_sum", where + ".mu", p.mu);
    }

    std::set<std::string> meas_names;
    for (const auto& m : model.measurements) {
        const std::string where = "measurements." + m.name;
        if (!meas_names.insert(m.name).second) out.add("duplicate_name", where, 0.0, 0.0, "duplicate measurement");
        if (m.xi.size() != m.outcomes.size()) {
            out.add("dimension", where + ".xi", static_cast<double>(m.xi.size()),
                    static_cast<double>(m.xi.size()) - static_cast<double>(m.outcomes.size()),
                    "xi has " + std::to_string(m.xi.size()) + " rows for " +
                        std::to_string(m.outcomes.size()) + " outcomes");
            continue;
        }
        bool shape_ok = true;
        for (std::size_t k = 0; k < m.xi.size(); ++k) {
            if (m.xi[k].size() != n_lambda) {
                shape_ok = false;
                out.add("dimension", where + ".xi[" + std::to_string(k) + "]",
                        static_cast<double>(m.xi[k].size()),
                        static_cast<double>(m.xi[k].size()) - static_cast<double>(n_lambda),
                        "row length differs from the number of ontic states");
            }
        }
        if (!shape_ok) continue;
        for (std::size_t k = 0; k < m.xi.size(); ++k) {
            for (std::size_t l = 0; l < n_lambda; ++l) {
                const double v = m.xi[k][l];
                if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                    out.add("xi_range", where + ".xi[" + std::to_string(k) + "][" + std::to_string(l) + "]", v,
                            v < 0.0 ? -v : v - 1.0, "response must lie in [0, 1]");
                }
            }
        }
        for (std::size_t l = 0; l < n_lambda; ++l) {
            double sum = 0.0;
            for (const auto& row : m.xi) sum += row[l];
            if (std::abs(sum - 1.0) > kNormTolerance) {
                out.add("xi_column_sum", where + ".lambda." + model.lambda.labels[l], sum, sum - 1.0,
                        "responses sum to " + format_real(sum) + ", deficit " + format_real(1.0 - sum));
            }
        }
    }

    if (model.born_targets) {
        for (const auto& [prep, by_meas] : *model.born_targets) {
            if (!model.find_preparation(prep))
                out.add("unknown_name", "born_targets." + prep, 0.0, 0.0, "no such preparation");
            for (const auto& [meas, probs] : by_meas) {
                const std::string where = "born_targets." + prep + "." + meas;
                const auto* m = model.find_measurement(meas);
                if (!m) {
                    out.add("unknown_name", where, 0.0, 0.0, "no such measurement");
                    continue;
                }
                if (probs.size() != m->outcomes.size()) {
                    out.add("dimension", where, static_cast<double>(probs.size()),
                            static_cast<double>(probs.size()) - static_cast<double>(m->outcomes.size()),
                            "target length differs from the number of outcomes");
                    continue;
                }
                check_distribution(out, "target_sum", where, probs);
            }
        }
        for (const auto& p : model.preparations) {
            const auto pit = model.born_targets->find(p.name);
            for (const auto& m : model.measurements) {
                if (pit == model.born_targets->end() || !pit->second.contains(m.name))
                    out.add("missing_target", "born_targets." + p.name + "." + m.name, 0.0, 0.0,
                            "no target for this preparation and measurement");
            }
        }
    }
    return out.take();
}

void require_valid(const OntModel& model) {
    const auto report = validate(model);
    if (!report.ok()) {
        const auto& first = report.issues.front();
        throw Error(ErrorKind::InvalidModel, first.location + ": " + first.message + " (" +
                                                 std::to_string(report.issues.size()) + " issue(s))");
    }
}

std::vector<double> outcome_probabilities(const EpistemicState& prep, const ResponseFunction& meas) {
    std::vector<double> out(meas.xi.size(), 0.0);
    for (std::size_t k = 0; k < meas.xi.size(); ++k) {
        if (meas.xi[k].size() != prep.mu.size())
            throw Error(ErrorKind::DimensionMismatch, "response and distribution sizes differ");
        for (std::size_t l = 0; l < prep.mu.size(); ++l) out[k] += meas.xi[k][l] * prep.mu[l];
    }
    return out;
}

BornDeviation born_deviation(const OntModel& model) {
    if (!model.born_targets) throw Error(ErrorKind::MissingTargets, "model has no born_targets");
    require_valid(model);
    BornDeviation out;
    for (const auto& p : model.preparations) {
        const auto& by_meas = model.born_targets->at(p.name);
        for (const auto& m : model.measurements) {
            const auto& target = by_meas.at(m.name);
            const auto predicted = outcome_probabilities(p, m);
            for (std::size_t k = 0; k < predicted.size(); ++k) {
                const double d = std::abs(target[k] - predicted[k]);
                out.table.push_back({p.name, m.name, m.outcomes[k], target[k], predicted[k], d});
                out.max_deviation = std::max(out.max_deviation, d);
            }
        }
    }
    return out;
}

std::string to_string(OverlapClass c) {
    switch (c) {
        case OverlapClass::Complete: return "complete";
        case OverlapClass::Partial: return "partial";
        case OverlapClass::None: return "none";
    }
    return "none";
}

OverlapReport overlap_classify(const LambdaSpace& space, const EpistemicState& mu1,
                               const EpistemicState& mu2) {
    if (mu1.mu.size() != space.size() || mu2.mu.size() != space.size())
        throw Error(ErrorKind::DimensionMismatch, "distributions must live on the same lambda space");
    OverlapReport out;
    bool identical_support = true;
    for (std::size_t l = 0; l < space.size(); ++l) {
        const bool in1 = mu1.mu[l] > 0.0;
        const bool in2 = mu2.mu[l] > 0.0;
        if (in1 != in2) identical_support = false;
        if (in1 && in2) out.common_support_labels.push_back(space.labels[l]);
        out.overlap_mass += std::min(mu1.mu[l], mu2.mu[l]);
    }
    if (out.common_support_labels.empty()) {
        out.overlap_class = OverlapClass::None;
        out.overlap_mass = 0.0;
    } else {
        out.overlap_class = identical_support ? OverlapClass::Complete : OverlapClass::Partial;
    }
    return out;
}

std::string to_string(InformationVerdict v) {
    return v == InformationVerdict::Minimal ? "minimal (psi-epistemic)" : "non-minimal (psi-ontic)";
}

InformationClass information_class(const OntModel& model) {
    require_valid(model);
    InformationClass out;
    out.supporting.resize(model.lambda.size());
    for (std::size_t l = 0; l < model.lambda.size(); ++l) {
        for (const auto& p : model.preparations)
            if (p.mu[l] > 0.0) out.supporting[l].push_back(p.name);
        if (out.supporting[l].size() > 1) out.verdict = InformationVerdict::Minimal;
    }
    return out;
}

OntModel select_preparations(const OntModel& model, const std::vector<std::string>& names) {
    OntModel out;
    out.lambda = model.lambda;
    out.measurements = model.measurements;
    for (const auto& name : names) {
        const auto* p = model.find_preparation(name);
        if (!p) throw Error(ErrorKind::InvalidModel, "no preparation named '" + name + "'");
        out.preparations.push_back(*p);
    }
    if (model.born_targets) {
        BornTargets kept;
        for (const auto& name : names) {
            const auto it = model.born_targets->find(name);
            if (it != model.born_targets->end()) kept[name] = it->second;
        }
        out.born_targets = std::move(kept);
    }
    return out;
}

GasModel gas_model(const ensemble::GasSpec& spec, const std::string& label, int exact_threshold,
                   std::size_t max_states) {
    GasModel out;
    out.spec = spec;
    out.binnings = ensemble::enumerate_binnings(spec, max_states);

    std::vector<ensemble::MultiplicityValue> omegas;
    omegas.reserve(out.binnings.size());
    bool all_exact = true;
    for (const auto& b : out.binnings) {
        omegas.push_back(ensemble::multiplicity(b, exact_threshold));
        all_exact = all_exact && omegas.back().exact.has_value();
    }

    std::vector<double> mu(out.binnings.size());
    if (all_exact) {
        ensemble::BigInt total = 0;
        for (const auto& w : omegas) total += *w.exact;
        std::vector<ensemble::Rational> exact;
        exact.reserve(omegas.size());
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            exact.emplace_back(*omegas[i].exact, total);
            mu[i] = exact.back().convert_to<double>();
        }
        out.exact_mu = std::move(exact);
    } else {
        double top = -std::numeric_limits<double>::infinity();
        for (const auto& w : omegas) top = std::max(top, w.log_omega);
        double z = 0.0;
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            mu[i] = std::exp(omegas[i].log_omega - top);
            z += mu[i];
        }
        for (auto& v : mu) v /= z;
    }

    auto& model = out.model;
    for (const auto& b : out.binnings) model.lambda.labels.push_back(b.key());
    model.preparations.push_back({label, std::move(mu)});

    ResponseFunction tagged;
    tagged.name = kTaggedEnergyMeasurement;
    for (int i = 0; i < spec.m; ++i) {
        tagged.outcomes.push_back(format_real(spec.level_energy(i)));
        std::vector<double> row(out.binnings.size());
        for (std::size_t l = 0; l < out.binnings.size(); ++l)
            row[l] = static_cast<double>(out.binnings[l].n[static_cast<std::size_t>(i)]) / spec.n;
        tagged.xi.push_back(std::move(row));
    }
    model.measurements.push_back(std::move(tagged));
    return out;
}

std::vector<double> tagged_energy_distribution(const GasModel& gas) {
    return outcome_probabilities(gas.model.preparations.front(), gas.model.measurements.front());
}

std::optional<std::vector<ensemble::Rational>> exact_tagged_energy_distribution(const GasModel& gas) {
    if (!gas.exact_mu) return std::nullopt;
    std::vector<ensemble::Rational> out(static_cast<std::size_t>(gas.spec.m), 0);
    for (std::size_t l = 0; l < gas.binnings.size(); ++l) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += (*gas.exact_mu)[l] * ensemble::Rational(gas.binnings[l].n[i], gas.spec.n);
    }
    return out;
}

std::size_t peak_state(const GasModel& gas) {
    std::size_t best = 0;
    const auto& mu = gas.model.preparations.front().mu;
    for (std::size_t l = 1; l < gas.binnings.size(); ++l) {
        const bool better = gas.exact_mu ? (*gas.exact_mu)[l] > (*gas.exact_mu)[best] : mu[l] > mu[best];
        if (better) best = l;
    }
    return best;
}

double peak_approximation_delta(const GasModel& gas) {
    const auto p = tagged_energy_distribution(gas);
    const std::size_t peak = peak_state(gas);
    const auto& xi = gas.model.measurements.front().xi;
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, std::abs(p[k] - xi[k][peak]));
    return worst;
}

}  // namespace ontic::ontology
