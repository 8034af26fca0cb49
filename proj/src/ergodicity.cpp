#include "fcg/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "fcg/numeric.hpp"

namespace fcg {

namespace {

constexpr std::uint64_t kTrajectoryStride = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPeriodStride = 0xD1B54A32D192ED03ULL;
constexpr std::size_t kMaxExhaustive = 1'000'000;

std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> log_factors(const Gamble& g) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::log1p(g[i]);
    return out;
}

bool all_above_minus_one(const Gamble& g) {
    const auto r = g.rewards();
    return std::all_of(r.begin(), r.end(), [](double x) { return x > -1.0; });
}

void require_growth_domain(const Gamble& g, const char* what) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > -1.0)) {
            std::ostringstream os;
            os.precision(17);
            os << what << ": state '" << g.space().label(i) << "' return " << g[i]
               << " must exceed -1 under multiplicative accumulation";
            throw DomainError(os.str());
        }
    }
}

}  // namespace

double stream_uniform(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t period) noexcept {
    const std::uint64_t key = mix(seed + kTrajectoryStride * (trajectory + 1));
    const std::uint64_t bits = mix(key + kPeriodStride * (period + 1));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::size_t sample_state(const ProbabilityMeasure& p, double uniform) noexcept {
    const auto w = p.weights();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        last_positive = i;
        cum += w[i];
        if (uniform < cum) return i;
    }
    // Rounding left cum slightly below 1.
    return last_positive;
}

void validate(const SimulationConfig& cfg) {
    require_same_space(cfg.gamble.space(), cfg.measure.space(), "simulate");
    if (cfg.periods < 1) throw SizeError("simulate: periods must be >= 1");
    if (cfg.trajectories < 1) throw SizeError("simulate: trajectories must be >= 1");
    if (!(cfg.initial_wealth > 0.0) || !std::isfinite(cfg.initial_wealth)) {
        throw DomainError("simulate: initial wealth must be positive");
    }
    if (cfg.mode == Accumulation::multiplicative) require_growth_domain(cfg.gamble, "simulate");
}

double theoretical_ensemble_growth(const Gamble& f, const ProbabilityMeasure& p) {
    require_growth_domain(f, "ensemble growth");
    return std::log1p(expectation(f, p));
}

double theoretical_time_growth(const Gamble& f, const ProbabilityMeasure& p) {
    require_growth_domain(f, "time growth");
    return expectation(Gamble(f.space(), log_factors(f)), p);
}

TrajectoryEnsemble simulate(const SimulationConfig& cfg) {
    validate(cfg);
    const std::size_t K = cfg.trajectories;
    const std::size_t n = cfg.periods;
    const std::size_t width = n + 1;
    const bool mult = cfg.mode == Accumulation::multiplicative;

    TrajectoryEnsemble ens;
    ens.mode = cfg.mode;
    ens.trajectories = K;
    ens.periods = n;
    ens.initial_wealth = cfg.initial_wealth;
    ens.wealth_paths.assign(K * width, 0.0);
    if (mult) ens.time_avg_growth_estimates.assign(K, 0.0);

    const auto rewards = cfg.gamble.rewards();
    const auto logs = mult ? log_factors(cfg.gamble) : std::vector<double>{};
    const double log_w0 = std::log(cfg.initial_wealth);

    // Multiplicative paths accumulate in log space to avoid underflow.
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            double* row = ens.wealth_paths.data() + k * width;
            row[0] = cfg.initial_wealth;
            double acc = mult ? log_w0 : cfg.initial_wealth;
            double log_sum = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const auto s = sample_state(cfg.measure, stream_uniform(cfg.seed, k, t));
                if (mult) {
                    acc += logs[s];
                    log_sum += logs[s];
                    row[t + 1] = std::exp(acc);
                } else {
                    acc += rewards[s];
                    row[t + 1] = acc;
                }
            }
            if (mult) ens.time_avg_growth_estimates[k] = log_sum / static_cast<double>(n);
        }
    };

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, K / 256)));
    if (threads <= 1) {
        run_range(0, K);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (K + threads - 1) / threads;
        for (std::size_t begin = 0; begin < K; begin += chunk) {
            pool.emplace_back(run_range, begin, std::min(K, begin + chunk));
        }
    }

    const double mean_f = expectation(cfg.gamble, cfg.measure);
    ens.expectation_path.resize(width);
    ens.empirical_mean_path.resize(width);
    ens.median_path.resize(width);
    std::vector<double> column(K);
    for (std::size_t t = 0; t < width; ++t) {
        const double td = static_cast<double>(t);
        ens.expectation_path[t] = mult ? cfg.initial_wealth * std::pow(1.0 + mean_f, td)
                                       : cfg.initial_wealth + td * mean_f;
        NeumaierAccumulator acc;
        for (std::size_t k = 0; k < K; ++k) {
            column[k] = ens.wealth_paths[k * width + t];
            acc.add(column[k]);
        }
        ens.empirical_mean_path[t] = acc.value() / static_cast<double>(K);
        const auto mid = column.begin() + static_cast<std::ptrdiff_t>(K / 2);
        std::nth_element(column.begin(), mid, column.end());
        double median = *mid;
        if (K % 2 == 0) median = 0.5 * (median + *std::max_element(column.begin(), mid));
        ens.median_path[t] = median;
    }

    if (all_above_minus_one(cfg.gamble)) {
        ens.theoretical_ensemble_growth = theoretical_ensemble_growth(cfg.gamble, cfg.measure);
        ens.theoretical_time_growth = theoretical_time_growth(cfg.gamble, cfg.measure);
    }
    if (mult) {
        ens.time_average_path.resize(width);
        for (std::size_t t = 0; t < width; ++t) {
            ens.time_average_path[t] =
                cfg.initial_wealth * std::exp(static_cast<double>(t) * *ens.theoretical_time_growth);
        }
    }
    return ens;
}

std::vector<ExhaustivePath> exhaustive_paths(const Gamble& gamble, const ProbabilityMeasure& measure,
                                             std::size_t periods, double initial_wealth, Accumulation mode) {
    require_same_space(gamble.space(), measure.space(), "exhaustive_paths");
    if (periods < 1) throw SizeError("exhaustive_paths: periods must be >= 1");
    const std::size_t m = gamble.size();
    std::size_t count = 1;
    for (std::size_t t = 0; t < periods; ++t) {
        if (count > kMaxExhaustive / m) {
            throw SizeError("exhaustive_paths: m^n exceeds 1e6 (m = " + std::to_string(m) +
                            ", n = " + std::to_string(periods) + ")");
        }
        count *= m;
    }
    if (mode == Accumulation::multiplicative) require_growth_domain(gamble, "exhaustive_paths");

    std::vector<ExhaustivePath> out;
    out.reserve(count);
    std::vector<std::size_t> digits(periods, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        ExhaustivePath path;
        path.states = digits;
        path.wealth.resize(periods + 1);
        path.wealth[0] = initial_wealth;
        path.probability = 1.0;
        for (std::size_t t = 0; t < periods; ++t) {
            const double f = gamble[digits[t]];
            path.wealth[t + 1] = mode == Accumulation::multiplicative ? path.wealth[t] * (1.0 + f)
                                                                      : path.wealth[t] + f;
            path.probability *= measure[digits[t]];
        }
        out.push_back(std::move(path));
        for (std::size_t t = periods; t-- > 0;) {
            if (++digits[t] < m) break;
            digits[t] = 0;
        }
    }
    return out;
}

GrowthSummary growth_rates(const TrajectoryEnsemble& ens) {
    if (ens.mode != Accumulation::multiplicative) {
        throw ModeError("growth_rates is defined for multiplicative ensembles only");
    }
    GrowthSummary s;
    const auto& est = ens.time_avg_growth_estimates;
    const double K = static_cast<double>(est.size());
    s.mean = neumaier_sum(est) / K;
    NeumaierAccumulator sq;
    for (double x : est) sq.add((x - s.mean) * (x - s.mean));
    s.stddev = est.size() > 1 ? std::sqrt(sq.value() / (K - 1.0)) : 0.0;
    s.standard_error = s.stddev / std::sqrt(K);
    s.theoretical_time_growth = ens.theoretical_time_growth.value_or(0.0);
    s.theoretical_ensemble_growth = ens.theoretical_ensemble_growth.value_or(0.0);
    s.divergence = s.theoretical_ensemble_growth - s.theoretical_time_growth;
    return s;
}

}  // namespace fcg
