#pragma once

// Dense two-phase simplex for small linear programs:
//   minimize c.x  subject to  rows (<=, >=, =)  and  x >= 0.
// Bland's rule for pivot selection, so no cycling; sized for tens of variables.

#include <cstddef>
#include <vector>

namespace ontic::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// `tolerance` bounds the reduced costs accepted as optimal.
Solution minimize(const Problem& problem, double tolerance = 1e-12);

}  // namespace ontic::lp
