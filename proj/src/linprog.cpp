#include "ontic/linprog.hpp"

#include <cmath>
#include <limits>

#include "ontic/error.hpp"

namespace ontic::lp {

namespace {

// Pivot elements below this are treated as zero in the ratio test.
constexpr double kPivotTolerance = 1e-9;

// Row-major tableau. Row i < m holds constraint i with the rhs in the last
// column; the objective row is kept separately as reduced costs.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return a_[r * (n_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, n_); }
    double rhs(std::size_t r) const { return at(r, n_); }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<double>& cost, double& cost_rhs) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        const double f = cost[pc];
        if (f != 0.0) {
            for (std::size_t c = 0; c < n_; ++c) cost[c] -= f * at(pr, c);
            cost_rhs -= f * rhs(pr);
            cost[pc] = 0.0;
        }
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> a_;
};

// Runs simplex iterations on `cost` (reduced costs over all columns) with the
// columns in `allowed` eligible to enter.
Status iterate(Tableau& t, std::vector<std::size_t>& basis, std::vector<double>& cost, double& cost_rhs,
               const std::vector<bool>& allowed, double tol) {
    const std::size_t max_iter = 50 * (t.rows() + t.cols()) + 1000;
    for (std::size_t it = 0; it < max_iter; ++it) {
        // Bland: lowest-index column with negative reduced cost.
        std::size_t enter = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && cost[c] < -tol) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols()) return Status::Optimal;

        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a > kPivotTolerance) {
                const double ratio = t.rhs(r) / a;
                if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave == t.rows()) return Status::Unbounded;
        t.pivot(leave, enter, cost, cost_rhs);
        basis[leave] = enter;
    }
    return Status::IterationLimit;
}

}  // namespace

Solution minimize(const Problem& problem, double tol) {
    const std::size_t n = problem.objective.size();
    const std::size_t m = problem.constraints.size();
    for (const auto& c : problem.constraints)
        if (c.coeffs.size() != n) throw Error(ErrorKind::DimensionMismatch, "constraint width differs from objective");

    // Column layout: originals | slack/surplus (one per inequality) | artificials (one per row).
    std::size_t n_slack = 0;
    for (const auto& c : problem.constraints)
        if (c.relation != Relation::Equal) ++n_slack;
    const std::size_t art0 = n + n_slack;
    const std::size_t total = art0 + m;

    Tableau t(m, total);
    std::vector<std::size_t> basis(m + 1, 0);  // basis[m] is a sentinel for tie-breaking
    std::size_t slack = n;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& c = problem.constraints[r];
        // Flip rows with negative rhs so artificials start feasible.
        const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * c.coeffs[j];
        if (c.relation == Relation::LessEqual) t.at(r, slack++) = sign;
        else if (c.relation == Relation::GreaterEqual) t.at(r, slack++) = -sign;
        t.at(r, art0 + r) = 1.0;
        t.rhs(r) = sign * c.rhs;
        basis[r] = art0 + r;
    }
    basis[m] = std::numeric_limits<std::size_t>::max();

    // Phase 1: minimize the sum of artificials.
    std::vector<double> cost(total, 0.0);
    double cost_rhs = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < art0; ++c) cost[c] -= t.at(r, c);
        cost_rhs -= t.rhs(r);
    }
    std::vector<bool> allowed(total, true);
    Solution sol;
    Status st = iterate(t, basis, cost, cost_rhs, allowed, tol);
    if (st == Status::IterationLimit) {
        sol.status = st;
        return sol;
    }
    // cost_rhs holds minus the phase-1 objective.
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, std::abs(problem.constraints[r].rhs));
    if (-cost_rhs > 1e-9 * scale) {
        sol.status = Status::Infeasible;
        return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < art0) continue;
        for (std::size_t c = 0; c < art0; ++c) {
            if (std::abs(t.at(r, c)) > 1e-9) {
                std::vector<double> dummy(total, 0.0);
                double dummy_rhs = 0.0;
                t.pivot(r, c, dummy, dummy_rhs);
                basis[r] = c;
                break;
            }
        }
    }

    // Phase 2 on the original objective with artificials barred.
    std::fill(cost.begin(), cost.end(), 0.0);
    cost_rhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) cost[j] = problem.objective[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = basis[r];
        if (b < n && cost[b] != 0.0) {
            const double f = cost[b];
            for (std::size_t c = 0; c < total; ++c) cost[c] -= f * t.at(r, c);
            cost_rhs -= f * t.rhs(r);
        }
    }
    for (std::size_t c = art0; c < total; ++c) allowed[c] = false;
    st = iterate(t, basis, cost, cost_rhs, allowed, tol);
    sol.status = st;
    if (st != Status::Optimal) return sol;

    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n) sol.x[basis[r]] = t.rhs(r);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += problem.objective[j] * sol.x[j];
    return sol;
}

}  // namespace ontic::lp
