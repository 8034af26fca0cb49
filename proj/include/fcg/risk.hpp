#pragma once

#include <optional>
#include <string>

#include "fcg/core.hpp"
#include "fcg/utility.hpp"

namespace fcg {

// Sign convention throughout: rho <= 0 is acceptable, rho > 0 signals risk.

/// -E_p[f^g / g], f >= 0, 0 < g < 1.
double rho_power(const Gamble& f, const ProbabilityMeasure& p, double gamma);

/// Entropic risk (1/a) log E_p[exp(-a f)], evaluated with a max shift.
double rho_exponential(const Gamble& f, const ProbabilityMeasure& p, double alpha);

/// -E_p[log(1+f)], f > -1.
double rho_log(const Gamble& f, const ProbabilityMeasure& p);

struct RiskReport {
    std::string gamble_id;
    UtilitySpec utility;
    ProbabilityMeasure measure;
    double rho = 0.0;
    bool acceptable = false;  // rho <= 1e-12
    /// E_p[log(1+f)], present when every reward exceeds -1.
    std::optional<double> expected_log_return;
    double arithmetic_expectation = 0.0;
    /// Arrow-Pratt relative risk aversion of u, taken at E_p[f].
    double relative_risk_aversion = 0.0;
};

/// Induced risk of f under u and p. Dispatch:
///   identity       -E_p[f]
///   log1p          rho_log
///   power(g)       -E_p[f^g / g]  (any g > 0)
///   exponential(a) rho_exponential
///   discounted     -E_p[u(f)]
RiskReport risk_report(const Gamble& f, const ProbabilityMeasure& p, const UtilitySpec& u,
                       std::string gamble_id = "f");

}  // namespace fcg
