#include "ontic/continuum.hpp"

#include <algorithm>
#include <cmath>

#include "ontic/error.hpp"
#include "ontic/format.hpp"

namespace ontic::continuum {

void check_gas(const ContinuumGas& gas) {
    if (!(gas.n > 0.0) || !std::isfinite(gas.n)) throw Error(ErrorKind::DomainError, "N must be positive");
    if (!(gas.t > 0.0) || !std::isfinite(gas.t)) throw Error(ErrorKind::DomainError, "T must be positive");
    if (!(gas.eps0 >= 0.0) || !std::isfinite(gas.eps0))
        throw Error(ErrorKind::DomainError, "eps0 must be non-negative");
}

namespace {

void check_range(double e1, const ContinuumGas& gas) {
    check_gas(gas);
    if (!(e1 > gas.eps0) || !std::isfinite(e1))
        throw Error(ErrorKind::DomainError, "E1 must exceed eps0, got E1 = " + format_real(e1));
}

}  // namespace

double rho(double eps, const ContinuumGas& gas, double e1) {
    check_range(e1, gas);
    if (!(eps >= gas.eps0 && eps <= e1))
        throw Error(ErrorKind::DomainError,
                    "eps = " + format_real(eps) + " outside [eps0, E1]");
    // 1 - exp(-L/T) via expm1 keeps precision for narrow ranges.
    const double norm = -std::expm1(-(e1 - gas.eps0) / gas.t);
    return gas.n / gas.t * std::exp(-(eps - gas.eps0) / gas.t) / norm;
}

double single_particle_pdf(double eps, const ContinuumGas& gas, double e1) {
    return rho(eps, gas, e1) / gas.n;
}

double energy_residual(double e1, const ContinuumGas& gas) {
    check_range(e1, gas);
    const double width = e1 - gas.eps0;
    // integral of eps * rho over [eps0, E1] = N(T + eps0) - N width / (exp(width/T) - 1)
    const double tail = gas.n * width / std::expm1(width / gas.t);
    return (e1 - gas.n * (gas.t + gas.eps0)) + tail;
}

double solve_total_energy(const ContinuumGas& gas, const SolveOptions& options) {
    check_gas(gas);
    double lo = gas.eps0 + std::max(1e-9, 1e-9 * gas.n * gas.t);
    // At N(T + eps0) the residual equals the (non-negative) tail term.
    double hi = std::max(gas.n * (gas.t + gas.eps0), 2.0 * lo);
    double f_lo = energy_residual(lo, gas);
    double f_hi = energy_residual(hi, gas);
    for (int grow = 0; f_hi < 0.0 && grow < 64; ++grow) {
        hi *= 2.0;
        f_hi = energy_residual(hi, gas);
    }
    if (f_hi == 0.0) return hi;
    if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
        throw Error(ErrorKind::NoConvergence,
                    "no sign change of the energy residual on [" + format_real(lo) + ", " +
                        format_real(hi) + "]: residuals " + format_real(f_lo) + ", " +
                        format_real(f_hi));
    }
    for (int it = 0; it < options.max_iterations; ++it) {
        if (hi - lo <= options.rel_tolerance * std::abs(hi)) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        const double f_mid = energy_residual(mid, gas);
        if (f_mid == 0.0) return mid;
        if (f_mid < 0.0) lo = mid;
        else hi = mid;
    }
    throw Error(ErrorKind::NoConvergence,
                "bisection cap reached with bracket [" + format_real(lo) + ", " + format_real(hi) + "]");
}

std::string DensityCurve::to_csv() const {
    std::string out = "eps,rho\n";
    for (const auto& p : points) out += format_real(p.eps) + "," + format_real(p.rho) + "\n";
    return out;
}

DensityCurve density_curve(const ContinuumGas& gas, double e1, int count) {
    check_range(e1, gas);
    if (count < 2) throw Error(ErrorKind::DomainError, "density curve needs at least 2 points");
    DensityCurve curve;
    curve.points.reserve(static_cast<std::size_t>(count));
    const double step = (e1 - gas.eps0) / (count - 1);
    for (int i = 0; i < count; ++i) {
        const double eps = i == count - 1 ? e1 : gas.eps0 + step * i;
        curve.points.push_back({eps, rho(eps, gas, e1)});
    }
    return curve;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace ontic::continuum
