#pragma once

// Exact micro-canonical statistics of an ideal gas on an integer energy lattice.
//
// Bin i (i = 0..M-1) holds single-particle energy eps_i = (eps0_units + i) * delta.
// A binning state {n_i} lists how many of the N particles sit in each bin; a
// microstate assigns a bin to every (distinguishable) particle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ontic::ensemble {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;
inline constexpr int kDefaultExactThreshold = 300;

struct GasSpec {
    int n = 1;                    // particle count
    int m = 1;                    // number of energy bins
    std::int64_t e_units = 0;     // total energy in lattice units
    double delta = 1.0;           // energy per lattice unit
    std::int64_t eps0_units = 0;  // ground-state offset in lattice units

    /// Total energy above N ground-state energies, in lattice units.
    std::int64_t excess_units() const { return e_units - static_cast<std::int64_t>(n) * eps0_units; }
    std::int64_t max_excess_units() const { return static_cast<std::int64_t>(n) * (m - 1); }
    bool feasible() const { return excess_units() >= 0 && excess_units() <= max_excess_units(); }

    double level_energy(int i) const { return static_cast<double>(eps0_units + i) * delta; }
    double total_energy() const { return static_cast<double>(e_units) * delta; }
    std::vector<double> level_energies() const;
};

/// Throws DomainError for malformed parameters and InfeasibleEnergy when the
/// two lattice constraints admit no solution.
void check_spec(const GasSpec& spec);

struct BinningState {
    std::vector<int> n;

    int particles() const;
    /// Sum of n_i * i, i.e. energy above the ground level in lattice units.
    std::int64_t excess_units() const;
    /// "[n0,n1,...]", identical to the JSON array form.
    std::string key() const;

    friend auto operator<=>(const BinningState&, const BinningState&) = default;
};

bool satisfies(const BinningState& b, const GasSpec& spec);

struct MultiplicityValue {
    double log_omega = 0.0;
    std::optional<BigInt> exact;
};

/// All occupancy vectors meeting both constraints, lexicographically ordered.
std::vector<BinningState> enumerate_binnings(const GasSpec& spec,
                                             std::size_t max_states = kDefaultMaxStates);

/// Omega = N! / prod n_i!. The exact value is filled in when N <= exact_threshold.
MultiplicityValue multiplicity(const BinningState& b, int exact_threshold = kDefaultExactThreshold);

/// S = k ln Omega.
double entropy(const BinningState& b, double k = 1.0);

/// Every binning state of maximal Omega (ties kept), lexicographic order.
std::vector<BinningState> most_probable_binnings(const GasSpec& spec,
                                                 std::size_t max_states = kDefaultMaxStates);

/// Which Stirling form feeds the stationarity condition of the variational
/// derivation. Leading: ln m! ~ m ln m. Standard: ln m! ~ m ln m - m.
enum class StirlingVariant { Leading, Standard };

struct BoltzmannFit {
    double alpha = 0.0;
    double beta = 0.0;               // 1 / energy
    std::vector<double> predicted;   // n_i
    int iterations = 0;
};

/// Lagrange-multiplier fit n_i = exp(-alpha) exp(-beta eps_i) (Standard variant)
/// or n_i = exp(-1 - alpha) exp(-beta eps_i) (Leading variant). alpha follows
/// from the particle-number constraint; beta is bracketed and bisected on the
/// mean-energy residual.
BoltzmannFit boltzmann_fit(const GasSpec& spec, StirlingVariant variant = StirlingVariant::Standard);

/// {Leading fit, Standard fit}.
std::pair<BoltzmannFit, BoltzmannFit> stirling_compare(const GasSpec& spec);

struct SamplerOptions {
    std::uint64_t burn_in = 1000;       // proposals discarded before recording
    std::uint64_t record_interval = 1;  // record the binning state every k-th proposal
    bool keep_trace = false;
};

struct MicrostateSample {
    std::map<BinningState, std::uint64_t> visits;
    std::uint64_t recorded = 0;
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    /// Recorded binning states in order, when keep_trace is set.
    std::vector<BinningState> trace;

    double frequency(const BinningState& b) const;
};

/// Random walk over microstates: each proposal moves one lattice unit of energy
/// from a uniformly chosen donor to a uniformly chosen recipient and is rejected
/// if either particle would leave the lattice. The proposal is symmetric, so the
/// stationary distribution is uniform over microstates. `steps` counts recorded
/// samples; the walk performs burn_in + steps * record_interval proposals.
MicrostateSample sample_microstates(const GasSpec& spec, std::uint64_t steps, std::uint64_t seed,
                                    const SamplerOptions& options = {});

}  // namespace ontic::ensemble
