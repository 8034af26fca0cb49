#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fcg/core.hpp"

namespace fcg {

enum class Accumulation { additive, multiplicative };

/// Repeated i.i.d. play of one gamble. Additive: w_t = w_0 + sum f.
/// Multiplicative: w_t = w_0 prod (1 + f).
struct SimulationConfig {
    Gamble gamble;
    ProbabilityMeasure measure;
    std::size_t periods = 1;
    std::size_t trajectories = 1;
    double initial_wealth = 1.0;
    std::uint64_t seed = 0;
    Accumulation mode = Accumulation::multiplicative;
    /// 0 picks hardware concurrency. Output does not depend on this.
    unsigned threads = 0;
};

/// Throws DomainError / SizeError on an invalid config.
void validate(const SimulationConfig& cfg);

/// Counter-based stream: the draw for (seed, trajectory, period) is a pure
/// function of those three integers.
///   key  = mix(seed + 0x9E3779B97F4A7C15 * (trajectory + 1))
///   bits = mix(key  + 0xD1B54A32D192ED03 * (period + 1))
/// with mix the SplitMix64 finalizer; the uniform is (bits >> 11) * 2^-53.
double stream_uniform(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t period) noexcept;

/// Inverse-CDF state pick over the fixed label order.
std::size_t sample_state(const ProbabilityMeasure& p, double uniform) noexcept;

class TrajectoryEnsemble {
public:
    Accumulation mode = Accumulation::multiplicative;
    std::size_t trajectories = 0;
    std::size_t periods = 0;
    double initial_wealth = 0.0;

    /// Row-major trajectories x (periods + 1).
    std::vector<double> wealth_paths;
    /// Analytic expectation curve: w0 (1 + E f)^t, or w0 + t E f.
    std::vector<double> expectation_path;
    std::vector<double> empirical_mean_path;
    /// Per-period median across trajectories.
    std::vector<double> median_path;
    /// w0 exp(t E[log(1+f)]); multiplicative only.
    std::vector<double> time_average_path;
    /// (1/n) sum log(1+f) per trajectory; multiplicative only.
    std::vector<double> time_avg_growth_estimates;
    /// log(1 + E f) and E log(1+f), present when every reward exceeds -1.
    std::optional<double> theoretical_ensemble_growth;
    std::optional<double> theoretical_time_growth;

    [[nodiscard]] double wealth(std::size_t trajectory, std::size_t period) const {
        return wealth_paths[trajectory * (periods + 1) + period];
    }
};

TrajectoryEnsemble simulate(const SimulationConfig& cfg);

struct ExhaustivePath {
    std::vector<std::size_t> states;
    /// periods + 1 entries starting at w0.
    std::vector<double> wealth;
    double probability = 0.0;
};

/// Every one of the m^n state sequences in lexicographic order (state 0
/// first), with exact products or sums. Throws SizeError when m^n > 10^6.
std::vector<ExhaustivePath> exhaustive_paths(const Gamble& gamble, const ProbabilityMeasure& measure,
                                             std::size_t periods, double initial_wealth, Accumulation mode);

struct GrowthSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double standard_error = 0.0;
    double theoretical_time_growth = 0.0;
    double theoretical_ensemble_growth = 0.0;
    /// ensemble - time; nonnegative by Jensen.
    double divergence = 0.0;
};

/// Throws ModeError for additive ensembles.
GrowthSummary growth_rates(const TrajectoryEnsemble& ensemble);

/// log(1 + E_p f) and E_p log(1+f). Throws DomainError if some f <= -1.
double theoretical_ensemble_growth(const Gamble& f, const ProbabilityMeasure& p);
double theoretical_time_growth(const Gamble& f, const ProbabilityMeasure& p);

}  // namespace fcg
