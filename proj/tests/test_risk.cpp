#include <doctest.h>

#include <cmath>
#include <random>

#include "fcg/combine.hpp"
#include "fcg/risk.hpp"

using namespace fcg;

namespace {

ProbabilityMeasure random_measure(const StateSpace& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> pv(s.size());
    double total = 0.0;
    for (auto& x : pv) total += (x = w(rng));
    for (auto& x : pv) x /= total;
    double fix = 1.0;
    for (std::size_t i = 0; i + 1 < pv.size(); ++i) fix -= pv[i];
    pv.back() = fix;
    return {s, pv};
}

}  // namespace

TEST_SUITE("risk") {

TEST_CASE("rho_power examples") {
    const auto s = StateSpace::anonymous(2);
    const auto half = ProbabilityMeasure::uniform(s);
    CHECK(rho_power(Gamble(s, {1, 1}), ProbabilityMeasure(s, {0.3, 0.7}), 0.5) == doctest::Approx(-2.0));
    CHECK(rho_power(Gamble(s, {4, 0}), half, 0.5) == doctest::Approx(-2.0));
    CHECK(rho_power(Gamble(s, {0, 0}), half, 0.5) == 0.0);
    CHECK_THROWS_AS(rho_power(Gamble(s, {-0.1, 1}), half, 0.5), DomainError);
    CHECK_THROWS_AS(rho_power(Gamble(s, {1, 1}), half, 1.0), DomainError);
}

TEST_CASE("rho_exponential examples") {
    const auto s = StateSpace::anonymous(2);
    const auto half = ProbabilityMeasure::uniform(s);
    CHECK(rho_exponential(Gamble(s, {1, -1}), half, 1.0) == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-14));
    CHECK(rho_exponential(Gamble(s, {1, -1}), half, 1.0) == doctest::Approx(0.4337808304830272).epsilon(1e-14));
    CHECK(rho_exponential(Gamble::constant(s, 0.7), half, 3.0) == doctest::Approx(-0.7).epsilon(1e-14));
    // Large exponents stay finite thanks to the shift.
    const double big = rho_exponential(Gamble(s, {-1000, 1000}), half, 1.0);
    CHECK(big == doctest::Approx(1000.0 - std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(rho_exponential(Gamble(s, {0.3, -0.2}), half, 1e-4) + 0.05) <= 1e-4);
    CHECK_THROWS_AS(rho_exponential(Gamble(s, {1, 1}), half, 0.0), DomainError);
}

TEST_CASE("rho_log examples") {
    const auto s = StateSpace::anonymous(2);
    const auto half = ProbabilityMeasure::uniform(s);
    CHECK(rho_log(Gamble(s, {0.25, -0.10}), half) == doctest::Approx(-0.058891517828191727).epsilon(1e-13));
    CHECK(rho_log(Gamble(s, {0.5, -0.4}), half) == doctest::Approx(0.05268025782891315).epsilon(1e-13));
    CHECK(rho_log(Gamble(s, {0.05, 0.05}), half) == doctest::Approx(-std::log(1.05)).epsilon(1e-14));
    CHECK_THROWS_AS(rho_log(Gamble(s, {-1.0, 0.1}), half), DomainError);
}

TEST_CASE("risk_report dispatch and fields") {
    const StateSpace s({"up", "down"});
    const auto half = ProbabilityMeasure::uniform(s);
    const Gamble a(s, {0.5, -0.4}), b(s, {0.05, 0.05});

    const auto ra = risk_report(a, half, UtilitySpec::log1p(), "A");
    CHECK(ra.gamble_id == "A");
    CHECK(ra.rho == doctest::Approx(0.05268).epsilon(1e-4));
    CHECK_FALSE(ra.acceptable);
    CHECK(ra.arithmetic_expectation == doctest::Approx(0.05).epsilon(1e-14));
    REQUIRE(ra.expected_log_return);
    CHECK(ra.rho == -*ra.expected_log_return);
    CHECK(ra.relative_risk_aversion == 1.0);

    const auto rb = risk_report(b, half, UtilitySpec::log1p());
    CHECK(rb.rho == doctest::Approx(-0.04879).epsilon(1e-4));
    CHECK(rb.acceptable);

    const auto ri = risk_report(a, half, UtilitySpec::identity());
    CHECK(ri.rho == -ri.arithmetic_expectation);
    CHECK(ri.rho == doctest::Approx(-0.05));
    CHECK(ri.acceptable);

    const auto re = risk_report(a, half, UtilitySpec::exponential(1.0));
    CHECK(re.rho == doctest::Approx(rho_exponential(a, half, 1.0)));
    CHECK(re.relative_risk_aversion == doctest::Approx(0.05));

    const auto rp = risk_report(Gamble(s, {4, 0}), half, UtilitySpec::power(0.5));
    CHECK(rp.rho == doctest::Approx(-2.0));
    CHECK(rp.relative_risk_aversion == doctest::Approx(0.5));

    const auto rpow2 = risk_report(Gamble(s, {2, 0}), half, UtilitySpec::power(2.0));
    CHECK(rpow2.rho == doctest::Approx(-1.0));

    const auto big_loss = risk_report(Gamble(s, {-1.5, 1.0}), half, UtilitySpec::identity());
    CHECK_FALSE(big_loss.expected_log_return.has_value());

    CHECK_THROWS_AS(risk_report(Gamble(s, {-1.5, 1.0}), half, UtilitySpec::log1p()), DomainError);
}

TEST_CASE("ordering: identity ties A and B, log1p prefers B") {
    const auto s = StateSpace::anonymous(2);
    const auto half = ProbabilityMeasure::uniform(s);
    const Gamble a(s, {0.5, -0.4}), b(s, {0.05, 0.05});
    CHECK(risk_report(a, half, UtilitySpec::identity()).rho ==
          doctest::Approx(risk_report(b, half, UtilitySpec::identity()).rho).epsilon(1e-14));
    CHECK(risk_report(b, half, UtilitySpec::log1p()).rho < risk_report(a, half, UtilitySpec::log1p()).rho);
}

TEST_CASE("property: sequential additivity in log domain") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> r(-0.9, 3.0);
    const auto s = StateSpace::anonymous(4);
    for (int t = 0; t < 2000; ++t) {
        const auto p = random_measure(s, rng);
        const Gamble f(s, {r(rng), r(rng), r(rng), r(rng)}), g(s, {r(rng), r(rng), r(rng), r(rng)});
        const auto fg = combine(UtilitySpec::log1p(), f, g).combined;
        REQUIRE(std::abs(rho_log(fg, p) - (rho_log(f, p) + rho_log(g, p))) <= 1e-10);
    }
}

TEST_CASE("property: monotonicity and constancy") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> base(0.0, 2.0), bump(0.0, 0.5);
    const auto s = StateSpace::anonymous(3);
    for (int t = 0; t < 2000; ++t) {
        const auto p = random_measure(s, rng);
        std::vector<double> gv(3), fv(3);
        for (std::size_t i = 0; i < 3; ++i) {
            gv[i] = base(rng) - 0.5;
            fv[i] = gv[i] + bump(rng);
        }
        const Gamble f(s, fv), g(s, gv);
        REQUIRE(rho_log(f, p) <= rho_log(g, p));
        REQUIRE(rho_exponential(f, p, 0.8) <= rho_exponential(g, p, 0.8) + 1e-15);
        std::vector<double> fpos(fv), gpos(gv);
        for (std::size_t i = 0; i < 3; ++i) {
            fpos[i] += 0.5;
            gpos[i] += 0.5;
        }
        REQUIRE(rho_power(Gamble(s, fpos), p, 0.3) <= rho_power(Gamble(s, gpos), p, 0.3));

        const double c = base(rng);
        const auto cst = Gamble::constant(s, c);
        REQUIRE(rho_exponential(cst, p, 1.3) == doctest::Approx(-c).epsilon(1e-13));
        REQUIRE(rho_log(cst, p) == doctest::Approx(-std::log1p(c)).epsilon(1e-13));
        REQUIRE(rho_power(cst, p, 0.4) == doctest::Approx(-std::pow(c, 0.4) / 0.4).epsilon(1e-13));
    }
}

TEST_CASE("property: entropic convexity") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> r(-3.0, 3.0), lam(0.0, 1.0);
    const auto s = StateSpace::anonymous(4);
    for (int t = 0; t < 2000; ++t) {
        const auto p = random_measure(s, rng);
        const Gamble f(s, {r(rng), r(rng), r(rng), r(rng)}), g(s, {r(rng), r(rng), r(rng), r(rng)});
        const double l = lam(rng);
        const auto mix = linear_combination(l, f, 1.0 - l, g);
        for (double alpha : {0.1, 1.0, 5.0}) {
            const double lhs = rho_exponential(mix, p, alpha);
            const double convex = l * rho_exponential(f, p, alpha) + (1 - l) * rho_exponential(g, p, alpha);
            REQUIRE(lhs <= convex + 1e-12);
            REQUIRE(lhs <= std::max(rho_exponential(f, p, alpha), rho_exponential(g, p, alpha)) + 1e-12);
        }
    }
}

TEST_CASE("property: entropic limit") {
    // The gap is about alpha Var(f) / 2, so rewards stay on a return scale.
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    const auto s = StateSpace::anonymous(5);
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_measure(s, rng);
        const Gamble f(s, {r(rng), r(rng), r(rng), r(rng), r(rng)});
        REQUIRE(std::abs(rho_exponential(f, p, 1e-4) + expectation(f, p)) <= 1e-4);
    }
}

}
