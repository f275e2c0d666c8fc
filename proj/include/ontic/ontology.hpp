#pragma once

// Finite ontological models: a discrete space of ontic states lambda, epistemic
// distributions mu_p(lambda) produced by preparations, and response functions
// xi_k(lambda) giving the probability that lambda yields outcome k. Integrals
// over lambda are sums here.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontic/ensemble.hpp"

namespace ontic::ontology {

inline constexpr double kNormTolerance = 1e-12;

struct LambdaSpace {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;
};

struct EpistemicState {
    std::string name;
    std::vector<double> mu;
};

struct ResponseFunction {
    std::string name;
    std::vector<std::string> outcomes;
    std::vector<std::vector<double>> xi;  // xi[outcome][lambda]
};

/// born_targets[preparation][measurement] = outcome probabilities.
using BornTargets = std::map<std::string, std::map<std::string, std::vector<double>>>;

struct OntModel {
    LambdaSpace lambda;
    std::vector<EpistemicState> preparations;
    std::vector<ResponseFunction> measurements;
    std::optional<BornTargets> born_targets;

    const EpistemicState* find_preparation(const std::string& name) const;
    const ResponseFunction* find_measurement(const std::string& name) const;
};

struct ValidationIssue {
    std::string code;      // e.g. "mu_sum", "xi_column_sum", "dimension"
    std::string location;  // which member
    double value = 0.0;    // offending value (sum, entry, size)
    double deviation = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
};

ValidationReport validate(const OntModel& model);

/// Throws InvalidModel listing the first issue if the model does not validate.
void require_valid(const OntModel& model);

/// P(k | p, m) = sum over lambda of xi_k(lambda) mu_p(lambda).
std::vector<double> outcome_probabilities(const EpistemicState& prep, const ResponseFunction& meas);

struct DeviationEntry {
    std::string preparation;
    std::string measurement;
    std::string outcome;
    double target = 0.0;
    double predicted = 0.0;
    double deviation = 0.0;
};

struct BornDeviation {
    double max_deviation = 0.0;
    std::vector<DeviationEntry> table;
};

/// Compares the model's outcome probabilities with born_targets; throws
/// MissingTargets when the model has none.
BornDeviation born_deviation(const OntModel& model);

enum class OverlapClass { Complete, Partial, None };

std::string to_string(OverlapClass c);

struct OverlapReport {
    OverlapClass overlap_class = OverlapClass::None;
    std::vector<std::string> common_support_labels;
    /// Overlap mass omega = sum over lambda of min(mu1, mu2).
    double overlap_mass = 0.0;
};

OverlapReport overlap_classify(const LambdaSpace& space, const EpistemicState& mu1,
                               const EpistemicState& mu2);

enum class InformationVerdict {
    NonMinimal,  // psi-ontic: no lambda serves two preparations
    Minimal,     // psi-epistemic: some lambda shared by distinct supports
};

std::string to_string(InformationVerdict v);

struct InformationClass {
    /// For each lambda, the preparations whose support contains it.
    std::vector<std::vector<std::string>> supporting;
    InformationVerdict verdict = InformationVerdict::NonMinimal;
};

InformationClass information_class(const OntModel& model);

/// Copy of `model` keeping only the named preparations (in the given order).
OntModel select_preparations(const OntModel& model, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Gas as an ontological model: lambda ranges over binning states at fixed
// energy, mu_T is proportional to the multiplicity, and the single measurement
// reads off the energy of one tagged ("painted") particle, xi_eps_i = n_i / N.

inline constexpr const char* kTaggedEnergyMeasurement = "tagged-particle energy";

struct GasModel {
    ensemble::GasSpec spec;
    std::vector<ensemble::BinningState> binnings;  // lambda order
    OntModel model;
    /// mu_T as exact fractions, present when every Omega was exact.
    std::optional<std::vector<ensemble::Rational>> exact_mu;
};

GasModel gas_model(const ensemble::GasSpec& spec, const std::string& label,
                   int exact_threshold = ensemble::kDefaultExactThreshold,
                   std::size_t max_states = ensemble::kDefaultMaxStates);

/// P_T(eps_i) = sum over lambda of mu_T(lambda) n_i(lambda) / N.
std::vector<double> tagged_energy_distribution(const GasModel& gas);
std::optional<std::vector<ensemble::Rational>> exact_tagged_energy_distribution(const GasModel& gas);

/// Index of the most probable binning state (first in lexicographic order on ties).
std::size_t peak_state(const GasModel& gas);

/// max over outcomes of |P_T(eps) - xi_eps(lambda_0)| with lambda_0 = peak_state.
double peak_approximation_delta(const GasModel& gas);

}  // namespace ontic::ontology
