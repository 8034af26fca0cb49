#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fcg/ergodicity.hpp"

using namespace fcg;

namespace {

struct OptionA {
    StateSpace s{std::vector<std::string>{"up", "down"}};
    Gamble f{s, {0.5, -0.4}};
    ProbabilityMeasure p = ProbabilityMeasure::uniform(s);
};

SimulationConfig config(const Gamble& f, const ProbabilityMeasure& p, std::size_t n, std::size_t k,
                        std::uint64_t seed, Accumulation mode = Accumulation::multiplicative) {
    SimulationConfig c{f, p};
    c.periods = n;
    c.trajectories = k;
    c.initial_wealth = 100.0;
    c.seed = seed;
    c.mode = mode;
    return c;
}

}  // namespace

TEST_SUITE("ergodicity") {

TEST_CASE("exhaustive paths for option A and option B") {
    OptionA a;
    const auto paths = exhaustive_paths(a.f, a.p, 2, 100.0, Accumulation::multiplicative);
    REQUIRE(paths.size() == 4);
    const double expected[] = {225.0, 90.0, 90.0, 36.0};
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(paths[i].wealth.back() - expected[i]) <= 1e-9);
        CHECK(paths[i].wealth.front() == 100.0);
        CHECK(paths[i].probability == doctest::Approx(0.25));
        total += paths[i].probability;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);

    const auto s1 = StateSpace::anonymous(1);
    const auto b = exhaustive_paths(Gamble(s1, {0.05}), ProbabilityMeasure::uniform(s1), 2, 100.0,
                                    Accumulation::multiplicative);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(b[0].wealth.back() - 110.25) <= 1e-9);
    CHECK(std::count_if(paths.begin(), paths.end(), [](const auto& p) { return p.wealth.back() < 110.25; }) == 3);
}

TEST_CASE("exhaustive paths: single period and three periods") {
    OptionA a;
    const auto one = exhaustive_paths(a.f, a.p, 1, 100.0, Accumulation::multiplicative);
    REQUIRE(one.size() == 2);
    CHECK(one[0].wealth.back() == doctest::Approx(150.0));
    CHECK(one[1].wealth.back() == doctest::Approx(60.0));

    const auto three = exhaustive_paths(a.f, a.p, 3, 100.0, Accumulation::multiplicative);
    REQUIRE(three.size() == 8);
    std::vector<double> finals;
    for (const auto& p : three) finals.push_back(p.wealth.back());
    std::sort(finals.begin(), finals.end());
    const double median = 0.5 * (finals[3] + finals[4]);
    CHECK(median < 110.25 * 1.05);
}

TEST_CASE("exhaustive paths: additive mode and size cap") {
    OptionA a;
    const auto add = exhaustive_paths(a.f, a.p, 2, 100.0, Accumulation::additive);
    CHECK(add[0].wealth.back() == doctest::Approx(101.0));
    CHECK(add[3].wealth.back() == doctest::Approx(99.2));
    // 2^20 = 1048576 and 10^7 exceed the cap.
    CHECK_THROWS_AS(exhaustive_paths(a.f, a.p, 20, 100.0, Accumulation::multiplicative), SizeError);
    const auto s10 = StateSpace::anonymous(10);
    const auto zero = Gamble::constant(s10, 0.0);
    const auto p10 = ProbabilityMeasure::uniform(s10);
    CHECK_THROWS_AS(exhaustive_paths(zero, p10, 7, 1.0, Accumulation::additive), SizeError);
    CHECK(exhaustive_paths(zero, p10, 5, 1.0, Accumulation::additive).size() == 100000);
}

TEST_CASE("simulate: constant gambles") {
    const auto s = StateSpace::anonymous(2);
    const auto p = ProbabilityMeasure::uniform(s);
    const auto mult = simulate(config(Gamble::constant(s, 0.05), p, 2, 7, 1));
    for (std::size_t k = 0; k < 7; ++k) CHECK(mult.wealth(k, 2) == doctest::Approx(110.25).epsilon(1e-14));
    const auto add = simulate(config(Gamble::constant(s, 0.3), p, 5, 4, 1, Accumulation::additive));
    for (std::size_t k = 0; k < 4; ++k) CHECK(add.wealth(k, 5) == doctest::Approx(101.5).epsilon(1e-14));
}

TEST_CASE("simulate: validation") {
    OptionA a;
    const auto bad = Gamble(a.s, {0.5, -1.0});
    CHECK_THROWS_AS(simulate(config(bad, a.p, 3, 3, 0)), DomainError);
    CHECK_NOTHROW(simulate(config(bad, a.p, 3, 3, 0, Accumulation::additive)));
    auto c = config(a.f, a.p, 3, 3, 0);
    c.initial_wealth = 0.0;
    CHECK_THROWS_AS(simulate(c), DomainError);
    c = config(a.f, a.p, 0, 3, 0);
    CHECK_THROWS_AS(simulate(c), SizeError);
}

TEST_CASE("simulate: paths start at w0, stay positive, underflow-safe") {
    OptionA a;
    const auto e = simulate(config(a.f, a.p, 400, 50, 3));
    for (std::size_t k = 0; k < 50; ++k) {
        CHECK(e.wealth(k, 0) == 100.0);
        for (std::size_t t = 0; t <= 400; ++t) REQUIRE(e.wealth(k, t) > 0.0);
    }
}

TEST_CASE("simulate: determinism across runs and thread counts") {
    OptionA a;
    auto c = config(a.f, a.p, 30, 3000, 99);
    c.threads = 1;
    const auto one = simulate(c);
    c.threads = 7;
    const auto seven = simulate(c);
    c.threads = 0;
    const auto dflt = simulate(c);
    CHECK(one.wealth_paths == seven.wealth_paths);
    CHECK(one.wealth_paths == dflt.wealth_paths);
    CHECK(one.time_avg_growth_estimates == seven.time_avg_growth_estimates);
    CHECK(one.median_path == seven.median_path);
    c.seed = 100;
    CHECK(simulate(c).wealth_paths != one.wealth_paths);
}

TEST_CASE("stream uniform is a pure function in [0, 1)") {
    CHECK(stream_uniform(1, 2, 3) == stream_uniform(1, 2, 3));
    CHECK(stream_uniform(1, 2, 3) != stream_uniform(1, 3, 2));
    double mean = 0.0;
    for (std::uint64_t t = 0; t < 100000; ++t) {
        const double u = stream_uniform(42, t / 100, t % 100);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        mean += u;
    }
    CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("sample_state uses inverse CDF in label order") {
    const auto s = StateSpace::anonymous(3);
    const ProbabilityMeasure p(s, {0.2, 0.0, 0.8});
    CHECK(sample_state(p, 0.0) == 0);
    CHECK(sample_state(p, 0.1999) == 0);
    CHECK(sample_state(p, 0.2) == 2);
    CHECK(sample_state(p, 0.9999999) == 2);
}

TEST_CASE("growth rates for option A and B") {
    OptionA a;
    CHECK(theoretical_time_growth(a.f, a.p) == doctest::Approx(-0.05268025782891315).epsilon(1e-13));
    CHECK(theoretical_ensemble_growth(a.f, a.p) == doctest::Approx(std::log(1.05)).epsilon(1e-14));
    const auto g = growth_rates(simulate(config(a.f, a.p, 30, 2000, 5)));
    CHECK(g.divergence == doctest::Approx(0.1014704219983452).epsilon(1e-12));
    CHECK(std::abs(g.mean - g.theoretical_time_growth) <= 4 * g.standard_error);

    const auto b = Gamble::constant(a.s, 0.05);
    const auto gb = growth_rates(simulate(config(b, a.p, 10, 10, 5)));
    CHECK(gb.theoretical_time_growth == doctest::Approx(std::log(1.05)).epsilon(1e-14));
    CHECK(gb.divergence == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gb.stddev == doctest::Approx(0.0));

    CHECK_THROWS_AS(growth_rates(simulate(config(a.f, a.p, 3, 3, 5, Accumulation::additive))), ModeError);
    CHECK_THROWS_AS(theoretical_time_growth(Gamble(a.s, {-1.0, 0.0}), a.p), DomainError);
}

TEST_CASE("curves: expectation, time average and median") {
    OptionA a;
    const auto e = simulate(config(a.f, a.p, 10, 501, 8));
    REQUIRE(e.expectation_path.size() == 11);
    CHECK(e.expectation_path[10] == doctest::Approx(100.0 * std::pow(1.05, 10)).epsilon(1e-13));
    CHECK(e.time_average_path[10] == doctest::Approx(100.0 * std::exp(10 * -0.05268025782891315)).epsilon(1e-12));
    std::vector<double> col;
    for (std::size_t k = 0; k < 501; ++k) col.push_back(e.wealth(k, 10));
    std::nth_element(col.begin(), col.begin() + 250, col.end());
    CHECK(e.median_path[10] == col[250]);
}

TEST_CASE("property: Jensen gap") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> r(-0.95, 3.0), w(0.05, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = 1 + t % 5;
        const auto s = StateSpace::anonymous(m);
        std::vector<double> fv(m), pv(m);
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            fv[i] = r(rng);
            total += (pv[i] = w(rng));
        }
        for (auto& x : pv) x /= total;
        double fix = 1.0;
        for (std::size_t i = 0; i + 1 < m; ++i) fix -= pv[i];
        pv.back() = fix;
        const ProbabilityMeasure p(s, pv);
        const Gamble f(s, fv);
        const double gap = theoretical_ensemble_growth(f, p) - theoretical_time_growth(f, p);
        REQUIRE(gap >= -1e-12);
        if (m > 1) REQUIRE(gap > 1e-12);
        const auto c = Gamble::constant(s, fv[0]);
        REQUIRE(std::abs(theoretical_ensemble_growth(c, p) - theoretical_time_growth(c, p)) <= 1e-12);
    }
}

TEST_CASE("property: exhaustive and Monte Carlo agree") {
    const auto s = StateSpace::anonymous(2);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> r(-0.5, 0.8), w(0.2, 0.8);
    for (int trial = 0; trial < 10; ++trial) {
        const double p0 = w(rng);
        const ProbabilityMeasure p(s, {p0, 1.0 - p0});
        const Gamble f(s, {r(rng), r(rng)});
        const std::size_t n = 1 + static_cast<std::size_t>(trial);
        double exact = 0.0;
        for (const auto& path : exhaustive_paths(f, p, n, 100.0, Accumulation::multiplicative)) {
            exact += path.probability * path.wealth.back();
        }
        const std::size_t k = 20000;
        const auto e = simulate(config(f, p, n, k, 1000 + trial));
        double mean = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += e.wealth(i, n);
        mean /= k;
        for (std::size_t i = 0; i < k; ++i) sq += (e.wealth(i, n) - mean) * (e.wealth(i, n) - mean);
        const double se = std::sqrt(sq / (k - 1) / k);
        CHECK(exact == doctest::Approx(e.expectation_path[n]).epsilon(1e-12));
        CHECK(std::abs(mean - exact) <= 3 * se + 1e-12);
    }
}

TEST_CASE("property: additive final wealth mean") {
    OptionA a;
    const std::size_t n = 20, k = 20000;
    const auto e = simulate(config(a.f, a.p, n, k, 77, Accumulation::additive));
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < k; ++i) mean += e.wealth(i, n);
    mean /= k;
    for (std::size_t i = 0; i < k; ++i) sq += (e.wealth(i, n) - mean) * (e.wealth(i, n) - mean);
    const double se = std::sqrt(sq / (k - 1) / k);
    CHECK(std::abs(mean - (100.0 + n * 0.05)) <= 3 * se);
    CHECK(e.empirical_mean_path[n] == doctest::Approx(mean).epsilon(1e-12));
}

}
