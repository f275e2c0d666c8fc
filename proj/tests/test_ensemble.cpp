#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ontic/ensemble.hpp"
#include "ontic/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ontic;
using namespace ontic::ensemble;
using support::kind_of;

namespace {

GasSpec gas(int n, int m, std::int64_t e) { return GasSpec{n, m, e}; }

std::vector<std::vector<int>> vectors_of(const std::vector<BinningState>& v) {
    std::vector<std::vector<int>> out;
    for (const auto& b : v) out.push_back(b.n);
    return out;
}

}  // namespace

TEST(Enumerate, UniqueSolution) {
    EXPECT_EQ(vectors_of(enumerate_binnings(gas(2, 2, 1))), (std::vector<std::vector<int>>{{1, 1}}));
}

TEST(Enumerate, MatchesBruteForceCube) {
    const auto expected = oracle::brute_binnings(3, 3, 2);
    ASSERT_EQ(expected, (std::vector<std::vector<int>>{{1, 2, 0}, {2, 0, 1}}));
    EXPECT_EQ(vectors_of(enumerate_binnings(gas(3, 3, 2))), expected);

    for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= 4; ++m)
            for (std::int64_t e = 0; e <= n * (m - 1); ++e)
                EXPECT_EQ(vectors_of(enumerate_binnings(gas(n, m, e))), oracle::brute_binnings(n, m, e))
                    << n << " " << m << " " << e;
}

TEST(Enumerate, Errors) {
    EXPECT_EQ(kind_of([] { enumerate_binnings(gas(1, 3, 5)); }), ErrorKind::InfeasibleEnergy);
    EXPECT_EQ(kind_of([] { enumerate_binnings(GasSpec{3, 3, 2, 1.0, 1}); }), ErrorKind::InfeasibleEnergy);
    EXPECT_EQ(kind_of([] { enumerate_binnings(gas(20, 6, 50), 10); }), ErrorKind::SizeLimit);
    EXPECT_EQ(kind_of([] { enumerate_binnings(GasSpec{2, 2, 1, 0.0}); }), ErrorKind::DomainError);
}

TEST(Enumerate, GroundOffsetShiftsEnergy) {
    // eps0 = 2 units: three particles at 2, 2, 3 lattice units.
    const GasSpec spec{3, 3, 7, 0.5, 2};
    const auto states = enumerate_binnings(spec);
    EXPECT_EQ(vectors_of(states), (std::vector<std::vector<int>>{{2, 1, 0}}));
    for (const auto& b : states) EXPECT_TRUE(satisfies(b, spec));
}

TEST(Multiplicity, SmallCases) {
    EXPECT_EQ(*multiplicity({{5, 0, 0}}).exact, 1);
    EXPECT_EQ(multiplicity({{5, 0, 0}}).log_omega, 0.0);
    EXPECT_EQ(*multiplicity({{2, 1, 1}}).exact, 12);
    EXPECT_EQ(*multiplicity({{1, 1}}).exact, 2);
}

TEST(Multiplicity, ExactThresholdAndLogAgreement) {
    const BinningState big{{100, 80, 60, 40, 20}};
    const auto w = multiplicity(big);
    ASSERT_TRUE(w.exact.has_value());
    EXPECT_EQ(*w.exact, oracle::multinomial(big.n));
    EXPECT_LE(std::abs(oracle::log_big(*w.exact) - w.log_omega), 1e-9 * std::max(1.0, w.log_omega));

    const BinningState huge{{200, 101}};
    EXPECT_FALSE(multiplicity(huge).exact.has_value());
    EXPECT_TRUE(multiplicity(huge, 400).exact.has_value());
}

TEST(Multiplicity, DependsOnlyOnOccupancy) {
    // Two different microstates of the same binning, counted independently.
    const auto counts = oracle::microstate_counts(4, 3, 2);
    for (const auto& [occ, count] : counts) EXPECT_EQ(*multiplicity({occ}).exact, count);
    std::vector<int> a = {0, 0, 1, 1};
    std::vector<int> b = {1, 0, 1, 0};
    const auto occupancy = [](const std::vector<int>& levels) {
        std::vector<int> occ(3, 0);
        for (int l : levels) ++occ[static_cast<std::size_t>(l)];
        return occ;
    };
    EXPECT_EQ(occupancy(a), occupancy(b));
    EXPECT_EQ(*multiplicity({occupancy(a)}).exact, *multiplicity({occupancy(b)}).exact);
}

TEST(Omega, SumEqualsFeasibleMicrostates) {
    for (int n = 1; n <= 6; ++n) {
        for (int m = 1; m <= 4; ++m) {
            for (std::int64_t e = 0; e <= n * (m - 1); ++e) {
                const auto counts = oracle::microstate_counts(n, m, e);
                std::uint64_t total = 0;
                for (const auto& [occ, c] : counts) total += c;
                BigInt sum = 0;
                for (const auto& b : enumerate_binnings(gas(n, m, e))) sum += *multiplicity(b).exact;
                EXPECT_EQ(sum, total);
            }
        }
    }
}

TEST(Entropy, Values) {
    EXPECT_EQ(entropy({{4, 0}}), 0.0);
    EXPECT_NEAR(entropy({{1, 1}}, 1.0), std::log(2.0), 1e-15);
    const BinningState b{{3, 2, 1}};
    EXPECT_DOUBLE_EQ(entropy(b, 2.0), 2.0 * entropy(b, 1.0));
}

TEST(MostProbable, TiesAndWinners) {
    EXPECT_EQ(vectors_of(most_probable_binnings(gas(3, 3, 2))),
              (std::vector<std::vector<int>>{{1, 2, 0}, {2, 0, 1}}));
    EXPECT_EQ(vectors_of(most_probable_binnings(gas(4, 3, 2))), (std::vector<std::vector<int>>{{2, 2, 0}}));
    EXPECT_EQ(vectors_of(most_probable_binnings(gas(5, 4, 0))), (std::vector<std::vector<int>>{{5, 0, 0, 0}}));
}

TEST(MostProbable, AgreesWithExhaustiveComparison) {
    for (int n = 2; n <= 7; ++n) {
        for (std::int64_t e = 0; e <= 2 * n; ++e) {
            const auto counts = oracle::microstate_counts(n, 3, e);
            std::uint64_t best = 0;
            for (const auto& [occ, c] : counts) best = std::max(best, c);
            std::vector<std::vector<int>> winners;
            for (const auto& [occ, c] : counts)
                if (c == best) winners.push_back(occ);
            EXPECT_EQ(vectors_of(most_probable_binnings(gas(n, 3, e))), winners);
        }
    }
}

TEST(BoltzmannFit, SymmetricCaseIsUniform) {
    const auto fit = boltzmann_fit(gas(6, 5, 12));
    EXPECT_EQ(fit.beta, 0.0);
    for (double v : fit.predicted) EXPECT_NEAR(v, 6.0 / 5.0, 1e-14);
}

TEST(BoltzmannFit, ClosedFormThreeBins) {
    // Mean level 2/3 with r = exp(-beta): (r + 2 r^2) / (1 + r + r^2) = 2/3,
    // i.e. 4 r^2 + r - 2 = 0.
    const double r = (std::sqrt(33.0) - 1.0) / 8.0;
    const double beta = -std::log(r);
    const auto fit = boltzmann_fit(gas(3, 3, 2));
    EXPECT_NEAR(fit.beta, beta, 1e-12);
    EXPECT_GT(fit.beta, 0.0);
    const double z = 1.0 + r + r * r;
    EXPECT_NEAR(fit.predicted[0], 3.0 / z, 1e-12);
    EXPECT_NEAR(fit.predicted[1], 3.0 * r / z, 1e-12);
    EXPECT_NEAR(fit.predicted[2], 3.0 * r * r / z, 1e-12);
    EXPECT_GT(fit.predicted[0], fit.predicted[1]);
    EXPECT_GT(fit.predicted[1], fit.predicted[2]);
    // n_i = exp(-alpha) exp(-beta eps_i)
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(fit.predicted[static_cast<std::size_t>(i)], std::exp(-fit.alpha - fit.beta * i), 1e-12);
}

TEST(BoltzmannFit, ReproducesConstraints) {
    const std::vector<GasSpec> specs = {gas(3, 3, 2), gas(60, 4, 7), gas(60, 4, 170), GasSpec{1000, 50, 6000, 0.25, 3},
                                        GasSpec{1'000'000, 1000, 100'000'000, 1.0, 0}};
    for (const auto& spec : specs) {
        const auto fit = boltzmann_fit(spec);
        double count = 0.0;
        double energy = 0.0;
        for (int i = 0; i < spec.m; ++i) {
            count += fit.predicted[static_cast<std::size_t>(i)];
            energy += fit.predicted[static_cast<std::size_t>(i)] * spec.level_energy(i);
        }
        EXPECT_NEAR(count, spec.n, 1e-10 * spec.n);
        EXPECT_NEAR(energy, spec.total_energy(), 1e-10 * spec.total_energy());
    }
}

TEST(BoltzmannFit, GeometricRatio) {
    const GasSpec spec{50, 8, 240, 0.3, 2};
    const auto fit = boltzmann_fit(spec);
    const double ratio = std::exp(-fit.beta * spec.delta);
    for (int i = 0; i + 1 < spec.m; ++i)
        EXPECT_NEAR(fit.predicted[static_cast<std::size_t>(i + 1)] / fit.predicted[static_cast<std::size_t>(i)], ratio,
                    1e-12);
}

TEST(BoltzmannFit, NegativeTemperatureBranch) {
    // Mean above the midpoint: occupancy grows with energy.
    const auto fit = boltzmann_fit(gas(10, 4, 25));
    EXPECT_LT(fit.beta, 0.0);
    EXPECT_LT(fit.predicted[0], fit.predicted[3]);
}

TEST(BoltzmannFit, Degenerate) {
    EXPECT_EQ(kind_of([] { boltzmann_fit(gas(3, 3, 0)); }), ErrorKind::DegenerateEnergy);
    EXPECT_EQ(kind_of([] { boltzmann_fit(gas(3, 3, 6)); }), ErrorKind::DegenerateEnergy);
    EXPECT_EQ(kind_of([] { boltzmann_fit(gas(3, 1, 0)); }), ErrorKind::DegenerateEnergy);
}

TEST(StirlingCompare, SameBetaAcrossGrid) {
    int checked = 0;
    for (int n : {3, 10, 60, 500})
        for (int m : {2, 3, 4, 7}) {
            for (std::int64_t e = 1; e < n * (m - 1); e += std::max<std::int64_t>(1, n * (m - 1) / 5)) {
                const auto [leading, standard] = stirling_compare(gas(n, m, e));
                EXPECT_LE(std::abs(leading.beta - standard.beta), 1e-10);
                EXPECT_NEAR(leading.alpha, standard.alpha - 1.0, 1e-12);
                for (int i = 0; i < m; ++i)
                    EXPECT_NEAR(leading.predicted[static_cast<std::size_t>(i)],
                                standard.predicted[static_cast<std::size_t>(i)], 1e-9);
                ++checked;
            }
        }
    EXPECT_GE(checked, 20);
    const auto [l, s] = stirling_compare(gas(4, 3, 4));
    EXPECT_EQ(l.beta, 0.0);
    EXPECT_EQ(s.beta, 0.0);
}

TEST(Sampler, SingleBinningState) {
    const auto s = sample_microstates(gas(2, 2, 1), 1000, 7);
    ASSERT_EQ(s.visits.size(), 1u);
    EXPECT_EQ(s.frequency({{1, 1}}), 1.0);
}

TEST(Sampler, Deterministic) {
    const auto a = sample_microstates(gas(5, 4, 6), 20000, 42);
    const auto b = sample_microstates(gas(5, 4, 6), 20000, 42);
    EXPECT_EQ(a.visits, b.visits);
    const auto c = sample_microstates(gas(5, 4, 6), 20000, 43);
    EXPECT_NE(a.visits, c.visits);
}

TEST(Sampler, StaysOnEnergyShell) {
    const GasSpec spec{6, 4, 10, 1.0, 1};
    SamplerOptions opt;
    opt.keep_trace = true;
    const auto s = sample_microstates(spec, 5000, 3, opt);
    for (const auto& b : s.trace) EXPECT_TRUE(satisfies(b, spec));
}

TEST(Sampler, EqualWeightTieWithinThreeSigma) {
    SamplerOptions opt;
    opt.keep_trace = true;
    const auto s = sample_microstates(gas(3, 3, 2), 100000, 2024, opt);
    std::vector<double> hits;
    hits.reserve(s.trace.size());
    for (const auto& b : s.trace) hits.push_back(b == BinningState{{1, 2, 0}} ? 1.0 : 0.0);
    const double sigma = oracle::batch_means_sigma(hits);
    EXPECT_NEAR(s.frequency({{1, 2, 0}}), 0.5, 3.0 * sigma);
    EXPECT_NEAR(s.frequency({{2, 0, 1}}), 0.5, 3.0 * sigma);
}

TEST(Sampler, ChiSquareAgainstMultiplicity) {
    int specs = 0;
    for (int n = 2; n <= 6; ++n) {
        for (int m = 2; m <= 4; ++m) {
            for (std::int64_t e = 0; e <= n * (m - 1); ++e) {
                const auto spec = gas(n, m, e);
                const auto states = enumerate_binnings(spec);
                if (states.size() < 2 || states.size() > 10) continue;
                BigInt total = 0;
                for (const auto& b : states) total += *multiplicity(b).exact;
                SamplerOptions opt;
                opt.record_interval = static_cast<std::uint64_t>(4 * n * n);
                const std::uint64_t steps = 100000;
                const auto s = sample_microstates(spec, steps, 1000 + static_cast<std::uint64_t>(specs), opt);
                double chi2 = 0.0;
                for (const auto& b : states) {
                    const double expected =
                        steps * multiplicity(b).exact->convert_to<double>() / total.convert_to<double>();
                    const auto it = s.visits.find(b);
                    const double seen = it == s.visits.end() ? 0.0 : static_cast<double>(it->second);
                    chi2 += (seen - expected) * (seen - expected) / expected;
                }
                EXPECT_LT(chi2, oracle::chi2_quantile_999(static_cast<int>(states.size()) - 1))
                    << "N=" << n << " M=" << m << " E=" << e;
                ++specs;
            }
        }
    }
    EXPECT_GT(specs, 10);
}
