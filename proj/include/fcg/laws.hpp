#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fcg/utility.hpp"

namespace fcg {

struct LawResult {
    std::string name;
    double max_residual = 0.0;
    std::size_t trials = 0;
    bool passed = false;
};

struct LawsReport {
    UtilitySpec utility;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    std::vector<LawResult> laws;
    /// Closed-region description of the sampler used.
    std::string sampler;
    [[nodiscard]] bool passed() const;
};

/// Sampling interval per state that keeps every triple of draws inside the
/// region where the operator is closed (e.g. exp(-a x) > 2/3 for exponential
/// utility, so that three transformed values still sum below 1).
struct SampleBox {
    double lo = 0.0;
    double hi = 0.0;
};
SampleBox closed_sample_box(const UtilitySpec& u);

/// Randomized check of associativity, commutativity, identity, monotonicity
/// and fold-order independence of the combination operator for u; log1p
/// additionally reports log-domain additivity. Each trial draws gambles over
/// `states` states.
LawsReport run_laws(const UtilitySpec& u, std::size_t trials, std::uint64_t seed, double tolerance = 1e-9,
                    std::size_t states = 4);

}  // namespace fcg
