#pragma once

// Continuum limit of the binned ideal gas (k = 1 units).
//
//   rho(eps) = (N / T) exp(-(eps - eps0) / T) / (1 - exp(-(E1 - eps0) / T)),  eps in [eps0, E1]
//
// E1 is both the upper end of the single-particle energy range and the total
// energy of the gas; the self-consistent E1 is the non-trivial root of
// E1 = integral of eps * rho(eps) over [eps0, E1].

#include <functional>
#include <string>
#include <vector>

namespace ontic::continuum {

struct ContinuumGas {
    double n = 1.0;     // particle count
    double t = 1.0;     // temperature
    double eps0 = 0.0;  // ground-state energy offset

    double beta() const { return 1.0 / t; }
};

void check_gas(const ContinuumGas& gas);

double rho(double eps, const ContinuumGas& gas, double e1);
double single_particle_pdf(double eps, const ContinuumGas& gas, double e1);

/// Closed form of E1 - integral(eps * rho) over [eps0, E1]:
///   E1 - N(T + eps0) + N (E1 - eps0) / (exp((E1 - eps0) / T) - 1)
double energy_residual(double e1, const ContinuumGas& gas);

struct SolveOptions {
    double rel_tolerance = 1e-12;
    int max_iterations = 200;
};

/// Non-trivial root of energy_residual. The trivial root E1 = eps0 is skipped
/// by starting the bracket at eps0 + max(1e-9, 1e-9 N T).
double solve_total_energy(const ContinuumGas& gas, const SolveOptions& options = {});

struct DensityPoint {
    double eps;
    double rho;
};

struct DensityCurve {
    std::vector<DensityPoint> points;

    /// "eps,rho" header, one row per point, 17 significant digits.
    std::string to_csv() const;
};

/// `count` >= 2 evenly spaced samples of rho over [eps0, E1].
DensityCurve density_curve(const ContinuumGas& gas, double e1, int count);

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

}  // namespace ontic::continuum
