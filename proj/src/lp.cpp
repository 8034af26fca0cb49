#include "fcg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fcg::lp {

namespace {

class Tableau {
public:
    Tableau(const Problem& p, const Options& opt)
        : m_(p.rows()), n_(p.cols()), width_(n_ + m_ + 1), opt_(opt),
          t_((m_ + 1) * width_, 0.0), basis_(m_) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (p.a[i].size() != n_) throw std::invalid_argument("lp: ragged constraint matrix");
            const double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * p.a[i][j];
            at(i, n_ + i) = 1.0;
            rhs(i) = sign * p.b[i];
            basis_[i] = n_ + i;
        }
    }

    /// Phase one: minimize the sum of artificials. Returns that minimum.
    Status phase_one(std::size_t& iterations) {
        for (std::size_t j = 0; j < width_; ++j) at(m_, j) = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) at(m_, j) -= at(i, j);
            rhs(m_) -= rhs(i);
        }
        return run(n_ + m_, iterations);
    }

    [[nodiscard]] double phase_one_value() const { return -rhs_const(m_); }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column allows it. Rows where none does are redundant and stay put.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t best = n_;
            double best_abs = opt_.pivot_tol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > best_abs) {
                    best_abs = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best < n_) pivot(i, best);
        }
    }

    Status phase_two(const std::vector<double>& c, std::size_t& iterations) {
        for (std::size_t j = 0; j < width_; ++j) at(m_, j) = j < n_ ? c[j] : 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = basis_[i] < n_ ? c[basis_[i]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(m_, j) -= cb * at(i, j);
        }
        return run(n_, iterations);
    }

    [[nodiscard]] std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, rhs_const(i));
        }
        return x;
    }

private:
    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    [[nodiscard]] double at_const(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
    double& rhs(std::size_t i) { return t_[i * width_ + width_ - 1]; }
    [[nodiscard]] double rhs_const(std::size_t i) const { return t_[i * width_ + width_ - 1]; }

    void pivot(std::size_t r, std::size_t col) {
        const double inv = 1.0 / at(r, col);
        for (std::size_t j = 0; j < width_; ++j) at(r, j) *= inv;
        at(r, col) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double factor = at(i, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= factor * at(r, j);
            at(i, col) = 0.0;
        }
        basis_[r] = col;
    }

    // Bland's rule: lowest-index improving column enters; among rows tied in
    // the ratio test, the lowest-index basic variable leaves.
    Status run(std::size_t allowed_cols, std::size_t& iterations) {
        while (true) {
            std::size_t enter = allowed_cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (at(m_, j) < -opt_.cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed_cols) return Status::optimal;
            if (++iterations > opt_.max_iterations) return Status::iteration_limit;

            std::size_t leave = m_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= opt_.pivot_tol) continue;
                const double ratio = std::max(0.0, rhs(i)) / a;
                if (leave == m_ || ratio < best_ratio - 1e-14 ||
                    (ratio <= best_ratio + 1e-14 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return Status::unbounded;
            pivot(leave, enter);
        }
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    Options opt_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

}  // namespace

Result solve(const Problem& problem, const Options& options) {
    if (problem.b.size() != problem.rows()) throw std::invalid_argument("lp: b length differs from row count");
    Result result;
    Tableau tab(problem, options);

    double scale = 1.0;
    for (double v : problem.b) scale = std::max(scale, std::abs(v));

    auto status = tab.phase_one(result.iterations);
    if (status == Status::iteration_limit) {
        result.status = status;
        return result;
    }
    result.infeasibility = tab.phase_one_value();
    if (result.infeasibility > options.feasibility_tol * scale) {
        result.status = Status::infeasible;
        return result;
    }
    tab.expel_artificials();
    status = tab.phase_two(problem.c, result.iterations);
    result.status = status;
    if (status != Status::optimal) return result;
    result.x = tab.solution();
    for (std::size_t j = 0; j < problem.cols(); ++j) result.objective += problem.c[j] * result.x[j];
    return result;
}

}  // namespace fcg::lp
