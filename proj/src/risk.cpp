#include "fcg/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fcg/numeric.hpp"

namespace fcg {

namespace {

double neg_expected_utility(const Gamble& f, const ProbabilityMeasure& p, const UtilitySpec& u) {
    require_same_space(f.space(), p.space(), "risk");
    NeumaierAccumulator acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!u.in_domain(f[i])) {
            std::ostringstream os;
            os.precision(17);
            os << "state '" << f.space().label(i) << "' value " << f[i] << " outside domain of " << u.to_string()
               << " (" << u.domain_text() << ")";
            throw DomainError(os.str());
        }
        acc.add(p[i] * u.forward(f[i]));
    }
    return -acc.value();
}

}  // namespace

double rho_power(const Gamble& f, const ProbabilityMeasure& p, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("rho_power needs 0 < gamma < 1");
    }
    return neg_expected_utility(f, p, UtilitySpec::power(gamma));
}

double rho_exponential(const Gamble& f, const ProbabilityMeasure& p, double alpha) {
    require_same_space(f.space(), p.space(), "rho_exponential");
    if (!(alpha > 0.0)) throw DomainError("rho_exponential needs alpha > 0");
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (p[i] > 0.0) shift = std::max(shift, -alpha * f[i]);
    }
    NeumaierAccumulator acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (p[i] > 0.0) acc.add(p[i] * std::exp(-alpha * f[i] - shift));
    }
    return (shift + std::log(acc.value())) / alpha;
}

double rho_log(const Gamble& f, const ProbabilityMeasure& p) {
    return neg_expected_utility(f, p, UtilitySpec::log1p());
}

RiskReport risk_report(const Gamble& f, const ProbabilityMeasure& p, const UtilitySpec& u, std::string gamble_id) {
    require_same_space(f.space(), p.space(), "risk_report");
    RiskReport r{std::move(gamble_id), u, p, 0.0, false, std::nullopt};
    r.arithmetic_expectation = expectation(f, p);
    const auto rewards = f.rewards();
    if (std::all_of(rewards.begin(), rewards.end(), [](double x) { return x > -1.0; })) {
        r.expected_log_return = -rho_log(f, p);
    }
    switch (u.kind()) {
        case UtilityKind::identity: r.rho = -r.arithmetic_expectation; break;
        case UtilityKind::log1p: r.rho = rho_log(f, p); break;
        case UtilityKind::exponential: r.rho = rho_exponential(f, p, u.parameter()); break;
        case UtilityKind::power:
        case UtilityKind::discounted: r.rho = neg_expected_utility(f, p, u); break;
    }
    r.acceptable = r.rho <= 1e-12;
    r.relative_risk_aversion = u.relative_risk_aversion(r.arithmetic_expectation);
    return r;
}

}  // namespace fcg
