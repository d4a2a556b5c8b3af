#pragma once

#include <cstddef>
#include <vector>

namespace gauge::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coefficients;
    Sense sense = Sense::LessEqual;
    double rhs = 0;
};

/// minimize cᵀx subject to the constraints and x >= 0.
struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0;
    std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule. Pivot tolerance `tol`.
Solution solve(const Problem& p, double tol = 1e-11);

}  // namespace gauge::lp
