#include "fcg/combine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcg/numeric.hpp"

namespace fcg {

namespace {

void require_combinable(const UtilitySpec& u) {
    if (!u.combinable()) {
        throw DomainError(u.to_string() +
                          " has u(0) != 0 and cannot define a combination operator; "
                          "use discounted-shifted");
    }
}

std::string at_state(const Gamble& g, std::size_t state, std::size_t index, double value) {
    std::ostringstream os;
    os.precision(17);
    os << "gamble " << index << ", state '" << g.space().label(state) << "', value " << value;
    return os.str();
}

}  // namespace

CombinationResult combine(const UtilitySpec& u, const Gamble& f, const Gamble& g) {
    const Gamble both[] = {f, g};
    return combine_seq(u, both);
}

CombinationResult combine_seq(const UtilitySpec& u, std::span<const Gamble> gambles) {
    if (gambles.empty()) throw Error("combine_seq: empty gamble list");
    require_combinable(u);
    const auto& space = gambles.front().space();
    for (const auto& g : gambles) require_same_space(space, g.space(), "combine");

    const std::size_t m = space.size();
    std::vector<Gamble> u_inputs;
    u_inputs.reserve(gambles.size());
    for (std::size_t k = 0; k < gambles.size(); ++k) {
        const auto& g = gambles[k];
        std::vector<double> uv(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (!u.in_domain(g[i])) {
                throw DomainError(at_state(g, i, k, g[i]) + " outside domain of " + u.to_string() +
                                  " (" + u.domain_text() + ")");
            }
            uv[i] = u.forward(g[i]);
        }
        u_inputs.emplace_back(space, std::move(uv));
    }

    std::vector<double> out(m);
    std::vector<double> sums(m);
    for (std::size_t i = 0; i < m; ++i) {
        NeumaierAccumulator acc;
        for (std::size_t k = 0; k < gambles.size(); ++k) {
            acc.add(u_inputs[k][i]);
            if (k > 0 && !u.in_range(acc.value())) {
                std::ostringstream os;
                os.precision(17);
                os << "closure fails at gamble " << k << ", state '" << space.label(i)
                   << "': transformed sum " << acc.value() << " outside range of " << u.to_string()
                   << " (" << u.range_text() << ")";
                throw RangeError(os.str());
            }
        }
        sums[i] = acc.value();
        out[i] = u.inverse(sums[i]);
        if (!u.in_domain(out[i])) {
            throw RangeError("combined value leaves domain of " + u.to_string() + " in state '" +
                             space.label(i) + "'");
        }
    }

    Gamble combined(space, std::move(out));
    std::vector<double> u_out(m);
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        u_out[i] = u.forward(combined[i]);
        residual = std::max(residual, std::abs(u_out[i] - sums[i]));
    }
    return CombinationResult{std::move(combined), std::move(u_inputs), Gamble(space, std::move(u_out)), u,
                             residual};
}

double log_additivity_check(const Gamble& f, const Gamble& g) {
    const auto log = UtilitySpec::log1p();
    const auto r = combine(log, f, g);
    double residual = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double lhs = std::log1p(r.combined[i]);
        const double rhs = std::log1p(f[i]) + std::log1p(g[i]);
        residual = std::max(residual, std::abs(lhs - rhs));
    }
    return residual;
}

}  // namespace fcg
