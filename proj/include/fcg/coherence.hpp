#pragma once

#include <optional>
#include <vector>

#include "fcg/core.hpp"
#include "fcg/utility.hpp"

namespace fcg {

struct CoherenceOptions {
    /// Minimal violation c.u(f) for a separating hyperplane to count.
    double separation_margin = 1e-9;
    /// Max-norm bound on witness reconstruction error.
    double witness_tol = 1e-8;
    /// Sure-loss threshold for avoids_partial_loss and the feasibility
    /// slack of representing functionals.
    double sure_loss_eps = 1e-9;
    double lp_feasibility_tol = 1e-9;
};

/// Finite generator set of acceptable gambles, evaluated through a utility.
/// Identity utility gives the classical (linear) acceptance cone; any other
/// normalized utility gives the cone of u-transformed generators.
class AcceptanceSet {
public:
    /// Generators must share `space` and lie in the domain of `utility`;
    /// exact duplicates are dropped, keeping first occurrence order.
    AcceptanceSet(StateSpace space, std::vector<Gamble> generators, UtilitySpec utility);

    [[nodiscard]] const StateSpace& space() const noexcept { return space_; }
    [[nodiscard]] const std::vector<Gamble>& generators() const noexcept { return generators_; }
    [[nodiscard]] const UtilitySpec& utility() const noexcept { return utility_; }
    [[nodiscard]] bool classical() const noexcept { return utility_.kind() == UtilityKind::identity; }

    /// u(g_k)(w) as columns: transformed()[k][w].
    [[nodiscard]] const std::vector<std::vector<double>>& transformed() const noexcept { return transformed_; }

private:
    StateSpace space_;
    std::vector<Gamble> generators_;
    UtilitySpec utility_;
    std::vector<std::vector<double>> transformed_;
};

struct MembershipResult {
    bool accepted = false;
    /// Accepted: u(f) = sum_k lambda_k u(g_k) + slack, lambda, slack >= 0.
    std::vector<double> lambda;
    std::vector<double> slack;
    /// Rejected: c >= 0, sum c = 1, c.u(g_k) >= 0 for all k, c.u(f) < 0.
    std::vector<double> separator;
    /// c.u(f) for rejections; 0 otherwise.
    double violation = 0.0;
    /// Max-norm reconstruction error of the accepting witness.
    double reconstruction_error = 0.0;
};

/// Decides u(f) in cone({u(g_k)} + nonnegative orthant).
MembershipResult cone_membership(const AcceptanceSet& set, const Gamble& f,
                                 const CoherenceOptions& opt = {});

struct PartialLossResult {
    bool avoids = true;
    /// When !avoids: a mixture (sum 1) whose transformed combination is
    /// uniformly <= -depth.
    std::vector<double> lambda;
    double depth = 0.0;
};

PartialLossResult avoids_partial_loss(const AcceptanceSet& set, const CoherenceOptions& opt = {});

/// Linear constraints describing every representing functional:
/// p >= 0, sum p = 1, row . p >= 0 for every row.
struct FeasiblePolytope {
    std::vector<std::vector<double>> rows;
};

struct RepresentingFunctional {
    ProbabilityMeasure weights;
    /// min_k p . u(g_k); empty when the set has no generators.
    std::optional<double> margin;
};

struct RepresentationResult {
    /// Empty when no simplex point has margin >= -sure_loss_eps.
    std::optional<RepresentingFunctional> functional;
    /// Best achievable margin, reported also when infeasible.
    std::optional<double> best_margin;
    FeasiblePolytope polytope;
};

/// Max-margin probability vector p with p . u(g_k) >= 0 for every generator.
RepresentationResult find_representing_functional(const AcceptanceSet& set,
                                                  const CoherenceOptions& opt = {});

struct Evaluation {
    double value = 0.0;
    bool accepted = false;  // value >= -1e-12
};

/// E_p[u(f)].
Evaluation evaluate(const UtilitySpec& u, const Gamble& f, const ProbabilityMeasure& p);
Evaluation evaluate(const RepresentingFunctional& l, const UtilitySpec& u, const Gamble& f);

/// Membership verdict for g given that f is already accepted. Throws Error if
/// f is not accepted.
bool upward_closure_check(const AcceptanceSet& set, const Gamble& f, const Gamble& g,
                          const CoherenceOptions& opt = {});

}  // namespace fcg
