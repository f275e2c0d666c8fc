#include "ontic/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ontic/error.hpp"

namespace ontic::ensemble {

std::vector<double> GasSpec::level_energies() const {
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = level_energy(i);
    return out;
}

void check_spec(const GasSpec& spec) {
    if (spec.n < 1) throw Error(ErrorKind::DomainError, "particle count must be >= 1");
    if (spec.m < 1) throw Error(ErrorKind::DomainError, "bin count must be >= 1");
    if (!(spec.delta > 0.0) || !std::isfinite(spec.delta))
        throw Error(ErrorKind::DomainError, "delta must be positive and finite");
    if (spec.e_units < 0 || spec.eps0_units < 0)
        throw Error(ErrorKind::DomainError, "energies must be non-negative lattice units");
    if (!spec.feasible()) {
        std::ostringstream msg;
        msg << "E_units - N*eps0_units = " << spec.excess_units() << " outside [0, "
            << spec.max_excess_units() << "]";
        throw Error(ErrorKind::InfeasibleEnergy, msg.str());
    }
}

int BinningState::particles() const { return std::accumulate(n.begin(), n.end(), 0); }

std::int64_t BinningState::excess_units() const {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < n.size(); ++i) e += static_cast<std::int64_t>(i) * n[i];
    return e;
}

std::string BinningState::key() const {
    std::string s = "[";
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(n[i]);
    }
    s += ']';
    return s;
}

bool satisfies(const BinningState& b, const GasSpec& spec) {
    if (b.n.size() != static_cast<std::size_t>(spec.m)) return false;
    if (std::any_of(b.n.begin(), b.n.end(), [](int v) { return v < 0; })) return false;
    return b.particles() == spec.n && b.excess_units() == spec.excess_units();
}

namespace {

// Depth-first over bins in increasing order, trying n_i = 0, 1, ... so that the
// output comes out lexicographically sorted. A partial assignment survives only
// if the remaining particles can still absorb the remaining energy.
class BinningEnumerator {
public:
    BinningEnumerator(const GasSpec& spec, std::size_t cap) : m_(spec.m), cap_(cap) {
        current_.n.assign(static_cast<std::size_t>(m_), 0);
        remaining_n_ = spec.n;
        remaining_e_ = spec.excess_units();
    }

    std::vector<BinningState> run() {
        recurse(0);
        return std::move(out_);
    }

private:
    void recurse(int bin) {
        if (bin == m_ - 1) {
            // Last bin takes everyone left; the energy must match exactly.
            if (static_cast<std::int64_t>(remaining_n_) * bin != remaining_e_) return;
            current_.n[static_cast<std::size_t>(bin)] = remaining_n_;
            if (out_.size() >= cap_) {
                throw Error(ErrorKind::SizeLimit,
                            "more than " + std::to_string(cap_) + " binning states");
            }
            out_.push_back(current_);
            current_.n[static_cast<std::size_t>(bin)] = 0;
            return;
        }
        const int total = remaining_n_;
        for (int k = 0; k <= total; ++k) {
            const int left = total - k;
            const std::int64_t e_left = remaining_e_ - static_cast<std::int64_t>(k) * bin;
            if (e_left < 0) break;
            // The `left` particles occupy bins bin+1..m-1.
            const std::int64_t lo = static_cast<std::int64_t>(left) * (bin + 1);
            const std::int64_t hi = static_cast<std::int64_t>(left) * (m_ - 1);
            if (e_left > hi) continue;
            if (e_left < lo) continue;
            current_.n[static_cast<std::size_t>(bin)] = k;
            remaining_n_ = left;
            remaining_e_ = e_left;
            recurse(bin + 1);
            remaining_n_ = total;
            remaining_e_ = e_left + static_cast<std::int64_t>(k) * bin;
        }
        current_.n[static_cast<std::size_t>(bin)] = 0;
    }

    int m_;
    std::size_t cap_;
    BinningState current_;
    int remaining_n_ = 0;
    std::int64_t remaining_e_ = 0;
    std::vector<BinningState> out_;
};

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

}  // namespace

std::vector<BinningState> enumerate_binnings(const GasSpec& spec, std::size_t max_states) {
    check_spec(spec);
    return BinningEnumerator(spec, max_states).run();
}

MultiplicityValue multiplicity(const BinningState& b, int exact_threshold) {
    MultiplicityValue out;
    const int total = b.particles();
    double log_omega = std::lgamma(static_cast<double>(total) + 1.0);
    for (int v : b.n) log_omega -= std::lgamma(static_cast<double>(v) + 1.0);
    // lgamma rounding can leave -0.0 or tiny negatives when Omega = 1.
    out.log_omega = std::max(0.0, log_omega);

    if (total <= exact_threshold) {
        BigInt omega = 1;
        int remaining = total;
        for (int v : b.n) {
            omega *= binomial(remaining, v);
            remaining -= v;
        }
        out.exact = std::move(omega);
        // Ln of small exact values straight from the integer.
        if (*out.exact < BigInt(1) << 52) out.log_omega = std::log(out.exact->convert_to<double>());
    }
    return out;
}

double entropy(const BinningState& b, double k) { return k * multiplicity(b).log_omega; }

std::vector<BinningState> most_probable_binnings(const GasSpec& spec, std::size_t max_states) {
    const auto all = enumerate_binnings(spec, max_states);
    std::vector<BinningState> best;
    if (spec.n <= kDefaultExactThreshold) {
        BigInt best_omega = 0;
        for (const auto& b : all) {
            BigInt omega = *multiplicity(b).exact;
            if (omega > best_omega) {
                best_omega = omega;
                best.clear();
            }
            if (omega == best_omega) best.push_back(b);
        }
        return best;
    }
    // Large N: compare log-multiplicities; ties within rounding are kept.
    double best_log = -std::numeric_limits<double>::infinity();
    for (const auto& b : all) {
        const double lw = multiplicity(b, 0).log_omega;
        const double tol = 1e-12 * std::max(1.0, std::abs(lw));
        if (lw > best_log + tol) {
            best_log = lw;
            best.clear();
            best.push_back(b);
        } else if (std::abs(lw - best_log) <= tol) {
            best.push_back(b);
        }
    }
    return best;
}

namespace {

constexpr int kMaxBisection = 200;
constexpr int kMaxBracketDoublings = 64;
constexpr double kBetaTolerance = 1e-12;

// Stationary occupancies for the variational problem with lattice exponent
// x = beta * delta. Only the x-dependence matters for the energy constraint;
// the multiplier alpha is then fixed by normalization.
struct Occupancies {
    std::vector<double> n;
    double log_partition;  // ln sum_i exp(-x i)
};

Occupancies stationary_occupancies(double x, int m, int n_particles) {
    Occupancies out;
    out.n.resize(static_cast<std::size_t>(m));
    // Shift exponents by their maximum for a stable log-sum-exp.
    const double top = x >= 0.0 ? 0.0 : -x * (m - 1);
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        const double w = std::exp(-x * i - top);
        out.n[static_cast<std::size_t>(i)] = w;
        z += w;
    }
    for (auto& v : out.n) v = n_particles * v / z;
    out.log_partition = std::log(z) + top;
    return out;
}

double mean_level(double x, int m) {
    const auto occ = stationary_occupancies(x, m, 1);
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += i * occ.n[static_cast<std::size_t>(i)];
    return s;
}

}  // namespace

BoltzmannFit boltzmann_fit(const GasSpec& spec, StirlingVariant variant) {
    check_spec(spec);
    const std::int64_t excess = spec.excess_units();
    if (excess == 0 || excess == spec.max_excess_units()) {
        throw Error(ErrorKind::DegenerateEnergy,
                    "energy at a lattice boundary: beta would be infinite");
    }
    const int m = spec.m;
    const double target = static_cast<double>(excess) / spec.n;

    BoltzmannFit fit;
    double x = 0.0;
    // Symmetric case: exactly half the maximum excess.
    if (2 * excess != spec.max_excess_units()) {
        // mean_level is strictly decreasing in x.
        const auto residual = [&](double xv) { return mean_level(xv, m) - target; };
        double lo = -1.0;
        double hi = 1.0;
        int grow = 0;
        while (residual(lo) <= 0.0 || residual(hi) >= 0.0) {
            if (++grow > kMaxBracketDoublings) {
                throw Error(ErrorKind::NoConvergence,
                            "no sign change for beta*delta in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
            }
            lo *= 2.0;
            hi *= 2.0;
        }
        int it = 0;
        for (; it < kMaxBisection; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (residual(mid) > 0.0) lo = mid;
            else hi = mid;
        }
        if ((hi - lo) / spec.delta > kBetaTolerance) {
            throw Error(ErrorKind::NoConvergence,
                        "beta bracket [" + std::to_string(lo / spec.delta) + ", " +
                            std::to_string(hi / spec.delta) + "] after " + std::to_string(it) +
                            " iterations");
        }
        fit.iterations = it;
        x = 0.5 * (lo + hi);
    }

    const auto occ = stationary_occupancies(x, m, spec.n);
    fit.beta = x / spec.delta;
    fit.predicted = occ.n;
    // n_i = exp(-c - alpha - beta eps_i) with c = 1 (Leading) or 0 (Standard);
    // summing over i gives alpha = ln Z(beta) - ln N - c, where Z uses the
    // absolute level energies eps_i = (eps0_units + i) delta.
    const double log_z = occ.log_partition - x * static_cast<double>(spec.eps0_units);
    const double c = variant == StirlingVariant::Leading ? 1.0 : 0.0;
    fit.alpha = log_z - std::log(static_cast<double>(spec.n)) - c;
    return fit;
}

std::pair<BoltzmannFit, BoltzmannFit> stirling_compare(const GasSpec& spec) {
    return {boltzmann_fit(spec, StirlingVariant::Leading),
            boltzmann_fit(spec, StirlingVariant::Standard)};
}

double MicrostateSample::frequency(const BinningState& b) const {
    if (recorded == 0) return 0.0;
    const auto it = visits.find(b);
    return it == visits.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(recorded);
}

MicrostateSample sample_microstates(const GasSpec& spec, std::uint64_t steps, std::uint64_t seed,
                                    const SamplerOptions& options) {
    check_spec(spec);
    if (options.record_interval == 0)
        throw Error(ErrorKind::DomainError, "record_interval must be positive");

    const int n = spec.n;
    const int top = spec.m - 1;

    // Start from the greedy microstate: fill particles to the top level in turn.
    std::vector<int> level(static_cast<std::size_t>(n), 0);
    BinningState counts{std::vector<int>(static_cast<std::size_t>(spec.m), 0)};
    std::int64_t left = spec.excess_units();
    for (auto& l : level) {
        l = static_cast<int>(std::min<std::int64_t>(top, left));
        left -= l;
        ++counts.n[static_cast<std::size_t>(l)];
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);

    MicrostateSample out;
    const auto propose = [&] {
        ++out.proposals;
        const int donor = pick(rng);
        const int recipient = pick(rng);
        auto& ld = level[static_cast<std::size_t>(donor)];
        if (donor == recipient || ld == 0) return;
        auto& lr = level[static_cast<std::size_t>(recipient)];
        if (lr == top) return;
        --counts.n[static_cast<std::size_t>(ld)];
        --counts.n[static_cast<std::size_t>(lr)];
        --ld;
        ++lr;
        ++counts.n[static_cast<std::size_t>(ld)];
        ++counts.n[static_cast<std::size_t>(lr)];
        ++out.accepted;
    };

    for (std::uint64_t i = 0; i < options.burn_in; ++i) propose();
    if (options.keep_trace) out.trace.reserve(steps);
    for (std::uint64_t s = 0; s < steps; ++s) {
        for (std::uint64_t k = 0; k < options.record_interval; ++k) propose();
        ++out.visits[counts];
        ++out.recorded;
        if (options.keep_trace) out.trace.push_back(counts);
    }
    return out;
}

}  // namespace ontic::ensemble
