#pragma once

#include <cstddef>
#include <vector>

namespace fcg::lp {

/// minimize c.x  subject to  A x = b,  x >= 0.
/// A is row-major with `rows()` rows of `c.size()` columns each.
struct Problem {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> c;

    [[nodiscard]] std::size_t rows() const noexcept { return a.size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return c.size(); }
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Result {
    Status status = Status::iteration_limit;
    std::vector<double> x;
    double objective = 0.0;
    /// Sum of artificial variables left after phase one. Zero (to tolerance)
    /// when the problem is feasible.
    double infeasibility = 0.0;
    std::size_t iterations = 0;
};

struct Options {
    double feasibility_tol = 1e-9;
    double pivot_tol = 1e-11;
    double cost_tol = 1e-11;
    std::size_t max_iterations = 100000;
};

/// Dense two-phase tableau simplex with Bland's rule, so the returned vertex
/// is a deterministic function of the input. Reentrant; no shared state.
Result solve(const Problem& problem, const Options& options = {});

}  // namespace fcg::lp
