#include "fcg/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fcg/lp.hpp"

namespace fcg {

namespace {

std::vector<double> transform_or_throw(const UtilitySpec& u, const Gamble& g, const char* what) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!u.in_domain(g[i])) {
            std::ostringstream os;
            os.precision(17);
            os << what << ": state '" << g.space().label(i) << "' value " << g[i] << " outside domain of "
               << u.to_string() << " (" << u.domain_text() << ")";
            throw DomainError(os.str());
        }
        out[i] = u.forward(g[i]);
    }
    return out;
}

lp::Options lp_options(const CoherenceOptions& opt) {
    lp::Options o;
    o.feasibility_tol = opt.lp_feasibility_tol;
    return o;
}

[[noreturn]] void solver_failed(const char* what, lp::Status status) {
    const char* why = status == lp::Status::iteration_limit ? "iteration limit"
                      : status == lp::Status::unbounded    ? "unexpectedly unbounded"
                                                            : "inconsistent verdict";
    throw SolverFailure(std::string(what) + ": " + why);
}

}  // namespace

AcceptanceSet::AcceptanceSet(StateSpace space, std::vector<Gamble> generators, UtilitySpec utility)
    : space_(std::move(space)), utility_(utility) {
    if (!utility_.normalized()) {
        throw DomainError("acceptance sets need a utility with u(0) = 0; " + utility_.to_string() + " is not");
    }
    for (auto& g : generators) {
        require_same_space(space_, g.space(), "acceptance set generator");
        if (std::find(generators_.begin(), generators_.end(), g) != generators_.end()) continue;
        transformed_.push_back(transform_or_throw(utility_, g, "generator"));
        generators_.push_back(std::move(g));
    }
}

MembershipResult cone_membership(const AcceptanceSet& set, const Gamble& f, const CoherenceOptions& opt) {
    require_same_space(set.space(), f.space(), "cone_membership");
    const auto target = transform_or_throw(set.utility(), f, "gamble");
    const auto& cols = set.transformed();
    const std::size_t m = target.size();
    const std::size_t n = cols.size();

    // Primal: sum_k lambda_k u(g_k) + s = u(f), minimizing total slack so the
    // witness leans on generators rather than on the orthant.
    lp::Problem primal;
    primal.a.assign(m, std::vector<double>(n + m, 0.0));
    primal.b = target;
    primal.c.assign(n + m, 0.0);
    for (std::size_t w = 0; w < m; ++w) {
        for (std::size_t k = 0; k < n; ++k) primal.a[w][k] = cols[k][w];
        primal.a[w][n + w] = 1.0;
        primal.c[n + w] = 1.0;
    }
    const auto pr = lp::solve(primal, lp_options(opt));
    if (pr.status == lp::Status::optimal) {
        MembershipResult r;
        r.accepted = true;
        r.lambda.assign(pr.x.begin(), pr.x.begin() + static_cast<std::ptrdiff_t>(n));
        r.slack.assign(m, 0.0);
        for (std::size_t w = 0; w < m; ++w) {
            double combo = 0.0;
            for (std::size_t k = 0; k < n; ++k) combo += r.lambda[k] * cols[k][w];
            r.slack[w] = std::max(0.0, target[w] - combo);
            r.reconstruction_error = std::max(r.reconstruction_error, std::abs(combo + r.slack[w] - target[w]));
        }
        if (r.reconstruction_error <= opt.witness_tol) return r;
    } else if (pr.status != lp::Status::infeasible) {
        solver_failed("cone_membership", pr.status);
    }

    // Dual: the closest-to-violating c on the simplex with c.u(g_k) >= 0.
    lp::Problem dual;
    dual.a.assign(n + 1, std::vector<double>(m + n, 0.0));
    dual.b.assign(n + 1, 0.0);
    dual.c.assign(m + n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t w = 0; w < m; ++w) dual.a[k][w] = cols[k][w];
        dual.a[k][m + k] = -1.0;
    }
    for (std::size_t w = 0; w < m; ++w) {
        dual.a[n][w] = 1.0;
        dual.c[w] = target[w];
    }
    dual.b[n] = 1.0;
    const auto dr = lp::solve(dual, lp_options(opt));
    if (dr.status != lp::Status::optimal) solver_failed("cone_membership separation", dr.status);

    MembershipResult r;
    r.separator.assign(dr.x.begin(), dr.x.begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t w = 0; w < m; ++w) r.violation += r.separator[w] * target[w];
    if (r.violation > -opt.separation_margin) solver_failed("cone_membership", lp::Status::optimal);
    return r;
}

PartialLossResult avoids_partial_loss(const AcceptanceSet& set, const CoherenceOptions& opt) {
    const auto& cols = set.transformed();
    const std::size_t n = cols.size();
    if (n == 0) return {};
    const std::size_t m = set.space().size();

    // max depth  s.t.  sum_k lambda_k u(g_k)(w) + depth <= 0,  sum lambda = 1.
    // Columns: lambda (n), depth+ , depth-, slack (m).
    const std::size_t cols_total = n + 2 + m;
    lp::Problem p;
    p.a.assign(m + 1, std::vector<double>(cols_total, 0.0));
    p.b.assign(m + 1, 0.0);
    p.c.assign(cols_total, 0.0);
    for (std::size_t w = 0; w < m; ++w) {
        for (std::size_t k = 0; k < n; ++k) p.a[w][k] = cols[k][w];
        p.a[w][n] = 1.0;
        p.a[w][n + 1] = -1.0;
        p.a[w][n + 2 + w] = 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) p.a[m][k] = 1.0;
    p.b[m] = 1.0;
    p.c[n] = -1.0;
    p.c[n + 1] = 1.0;

    const auto res = lp::solve(p, lp_options(opt));
    if (res.status != lp::Status::optimal) solver_failed("avoids_partial_loss", res.status);
    PartialLossResult out;
    out.depth = res.x[n] - res.x[n + 1];
    if (out.depth >= opt.sure_loss_eps) {
        out.avoids = false;
        out.lambda.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

RepresentationResult find_representing_functional(const AcceptanceSet& set, const CoherenceOptions& opt) {
    const auto& cols = set.transformed();
    const std::size_t n = cols.size();
    const std::size_t m = set.space().size();

    RepresentationResult out;
    out.polytope.rows = cols;
    if (n == 0) {
        out.functional = RepresentingFunctional{ProbabilityMeasure::uniform(set.space()), std::nullopt};
        return out;
    }

    // max margin  s.t.  u(g_k) . p - margin >= 0,  sum p = 1.
    // Columns: p (m), margin+, margin-, surplus (n).
    const std::size_t cols_total = m + 2 + n;
    lp::Problem p;
    p.a.assign(n + 1, std::vector<double>(cols_total, 0.0));
    p.b.assign(n + 1, 0.0);
    p.c.assign(cols_total, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t w = 0; w < m; ++w) p.a[k][w] = cols[k][w];
        p.a[k][m] = -1.0;
        p.a[k][m + 1] = 1.0;
        p.a[k][m + 2 + k] = -1.0;
    }
    for (std::size_t w = 0; w < m; ++w) p.a[n][w] = 1.0;
    p.b[n] = 1.0;
    p.c[m] = -1.0;
    p.c[m + 1] = 1.0;

    const auto res = lp::solve(p, lp_options(opt));
    if (res.status != lp::Status::optimal) solver_failed("find_representing_functional", res.status);

    std::vector<double> weights(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(m));
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& col : cols) {
        double v = 0.0;
        for (std::size_t w = 0; w < m; ++w) v += weights[w] * col[w];
        margin = std::min(margin, v);
    }
    out.best_margin = margin;
    if (margin >= -opt.sure_loss_eps) {
        out.functional = RepresentingFunctional{ProbabilityMeasure(set.space(), std::move(weights)), margin};
    }
    return out;
}

Evaluation evaluate(const UtilitySpec& u, const Gamble& f, const ProbabilityMeasure& p) {
    require_same_space(f.space(), p.space(), "evaluate");
    const Gamble transformed(f.space(), transform_or_throw(u, f, "evaluate"));
    Evaluation e;
    e.value = expectation(transformed, p);
    e.accepted = e.value >= -1e-12;
    return e;
}

Evaluation evaluate(const RepresentingFunctional& l, const UtilitySpec& u, const Gamble& f) {
    return evaluate(u, f, l.weights);
}

bool upward_closure_check(const AcceptanceSet& set, const Gamble& f, const Gamble& g,
                          const CoherenceOptions& opt) {
    if (!cone_membership(set, f, opt).accepted) {
        throw Error("upward_closure_check: reference gamble is not accepted");
    }
    return cone_membership(set, g, opt).accepted;
}

}  // namespace fcg
