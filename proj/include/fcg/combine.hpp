#pragma once

#include <span>
#include <vector>

#include "fcg/core.hpp"
#include "fcg/utility.hpp"

namespace fcg {

struct CombinationResult {
    Gamble combined;
    /// u(g_k) for each input, in input order. For log1p these are log-returns.
    std::vector<Gamble> input_u_values;
    /// u(combined).
    Gamble combined_u_values;
    UtilitySpec utility;
    /// max over states of |u(combined) - sum_k u(g_k)|.
    double residual = 0.0;
};

/// f (+)_u g = u^-1(u(f) + u(g)), statewise.
///
/// Throws DomainError when an input leaves the domain of u (or when u is raw
/// discounted utility, which lacks u(0) = 0), RangeError when u(f)+u(g) leaves
/// the range of u. Both name the first offending state.
CombinationResult combine(const UtilitySpec& u, const Gamble& f, const Gamble& g);

/// Left fold of combine over a non-empty list. Transformed values are summed
/// once per state and inverted once; closure is checked on every partial sum
/// and a failure names the list index where it occurred.
CombinationResult combine_seq(const UtilitySpec& u, std::span<const Gamble> gambles);

/// max over states of |L(f (+) g) - L(f) - L(g)| with L = log1p.
double log_additivity_check(const Gamble& f, const Gamble& g);

}  // namespace fcg
