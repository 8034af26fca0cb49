#include "fcg/utility.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace fcg {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_parameter(std::string_view text, std::string_view whole) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
        throw ParseError("bad utility parameter in '" + std::string(whole) + "'");
    }
    return v;
}

std::string where(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

UtilitySpec UtilitySpec::power(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("power utility needs gamma > 0, got " + where(gamma));
    }
    return UtilitySpec(UtilityKind::power, gamma, false);
}

UtilitySpec UtilitySpec::exponential(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("exponential utility needs alpha > 0, got " + where(alpha));
    }
    return UtilitySpec(UtilityKind::exponential, alpha, false);
}

UtilitySpec UtilitySpec::discounted(double alpha, bool shifted) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw DomainError("discounted utility needs 0 <= alpha < 1, got " + where(alpha));
    }
    return UtilitySpec(UtilityKind::discounted, alpha, shifted);
}

UtilitySpec UtilitySpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const bool has_param = colon != std::string_view::npos;
    auto param = [&] {
        if (!has_param) throw ParseError("utility '" + std::string(text) + "' needs a parameter");
        return parse_parameter(text.substr(colon + 1), text);
    };
    auto no_param = [&] {
        if (has_param) throw ParseError("utility '" + std::string(name) + "' takes no parameter");
    };
    if (name == "identity") {
        no_param();
        return identity();
    }
    if (name == "log1p") {
        no_param();
        return log1p();
    }
    if (name == "power") return power(param());
    if (name == "exp") return exponential(param());
    if (name == "discounted") return discounted(param(), false);
    if (name == "discounted-shifted") return discounted(param(), true);
    throw ParseError("unknown utility '" + std::string(text) + "'");
}

std::string UtilitySpec::to_string() const {
    switch (kind_) {
        case UtilityKind::identity: return "identity";
        case UtilityKind::log1p: return "log1p";
        case UtilityKind::power: return "power:" + format_double(param_);
        case UtilityKind::exponential: return "exp:" + format_double(param_);
        case UtilityKind::discounted:
            return (shifted_ ? "discounted-shifted:" : "discounted:") + format_double(param_);
    }
    return {};
}

bool UtilitySpec::in_domain(double x) const noexcept {
    if (!std::isfinite(x)) return false;
    switch (kind_) {
        case UtilityKind::identity:
        case UtilityKind::exponential: return true;
        case UtilityKind::log1p: return x > -1.0;
        case UtilityKind::power: return x >= 0.0;
        case UtilityKind::discounted: return shifted_ ? x >= 0.0 : x > 0.0;
    }
    return false;
}

bool UtilitySpec::in_range(double y) const noexcept {
    if (!std::isfinite(y)) return false;
    switch (kind_) {
        case UtilityKind::identity:
        case UtilityKind::log1p: return true;
        case UtilityKind::power: return y >= 0.0;
        case UtilityKind::exponential: return y < 1.0;
        case UtilityKind::discounted:
            if (shifted_) return y >= 0.0;
            return y > -param_ / (1.0 - param_);
    }
    return false;
}

std::string UtilitySpec::domain_text() const {
    switch (kind_) {
        case UtilityKind::identity:
        case UtilityKind::exponential: return "all reals";
        case UtilityKind::log1p: return "x > -1";
        case UtilityKind::power: return "x >= 0";
        case UtilityKind::discounted: return shifted_ ? "x >= 0" : "x > 0";
    }
    return {};
}

std::string UtilitySpec::range_text() const {
    switch (kind_) {
        case UtilityKind::identity:
        case UtilityKind::log1p: return "all reals";
        case UtilityKind::power: return "y >= 0";
        case UtilityKind::exponential: return "y < 1";
        case UtilityKind::discounted:
            if (shifted_) return "y >= 0";
            return "y > " + where(-param_ / (1.0 - param_));
    }
    return {};
}

bool UtilitySpec::normalized() const noexcept {
    // Raw discounted utility has u(0) = -a/(1-a) and excludes 0 from its
    // domain even at a = 0.
    return kind_ != UtilityKind::discounted || shifted_;
}

double UtilitySpec::forward(double x) const {
    if (!in_domain(x)) {
        throw DomainError(to_string() + " undefined at x = " + where(x) + " (requires " + domain_text() + ")");
    }
    switch (kind_) {
        case UtilityKind::identity: return x;
        case UtilityKind::log1p: return std::log1p(x);
        case UtilityKind::power: return std::pow(x, param_) / param_;
        case UtilityKind::exponential: return -std::expm1(-param_ * x);
        case UtilityKind::discounted: {
            const double q = 1.0 - param_;
            if (shifted_) return std::pow(x, q) / q;
            return (std::pow(x, q) - param_) / q;
        }
    }
    return 0.0;
}

double UtilitySpec::inverse(double y) const {
    if (!in_range(y)) {
        throw RangeError(to_string() + " has no inverse at y = " + where(y) + " (range " + range_text() + ")");
    }
    switch (kind_) {
        case UtilityKind::identity: return y;
        case UtilityKind::log1p: return std::expm1(y);
        case UtilityKind::power: return std::pow(param_ * y, 1.0 / param_);
        case UtilityKind::exponential: return -std::log1p(-y) / param_;
        case UtilityKind::discounted: {
            const double q = 1.0 - param_;
            if (shifted_) return std::pow(q * y, 1.0 / q);
            return std::pow(q * y + param_, 1.0 / q);
        }
    }
    return 0.0;
}

double UtilitySpec::relative_risk_aversion(double x) const {
    switch (kind_) {
        case UtilityKind::identity: return 0.0;
        // Measured against wealth 1+x, where log utility has constant RRA.
        case UtilityKind::log1p: return 1.0;
        case UtilityKind::power: return 1.0 - param_;
        case UtilityKind::exponential: return param_ * x;
        case UtilityKind::discounted: return param_;
    }
    return 0.0;
}

WellBehavedReport check_well_behaved(const UtilitySpec& u,
                                     const std::vector<std::pair<double, double>>& probes) {
    WellBehavedReport report;
    switch (u.kind()) {
        case UtilityKind::identity:
            report.symbolic = "closed: range is all reals";
            break;
        case UtilityKind::log1p:
            report.symbolic = "closed on (-1, inf): range is all reals";
            break;
        case UtilityKind::power:
            report.symbolic = "closed on x >= 0: range [0, inf) is closed under addition";
            break;
        case UtilityKind::exponential:
            report.symbolic = "closed only where exp(-a x1) + exp(-a x2) > 1, a = " + where(u.parameter());
            break;
        case UtilityKind::discounted:
            report.symbolic = u.shifted()
                                  ? "closed on x >= 0 (shifted form coincides with power utility, g = 1 - a)"
                                  : (u.parameter() == 0.0
                                         ? "closed on x > 0 (a = 0 is linear utility)"
                                         : "not closed: u(0) != 0 and u(x1)+u(x2) can fall below the range bound " +
                                               u.range_text());
            break;
    }
    for (const auto& [x1, x2] : probes) {
        ProbeResult r;
        r.x1 = x1;
        r.x2 = x2;
        r.inputs_in_domain = u.in_domain(x1) && u.in_domain(x2);
        if (r.inputs_in_domain) {
            const double s = u.forward(x1) + u.forward(x2);
            r.sum_in_range = u.in_range(s);
            if (r.sum_in_range) {
                r.combined = u.inverse(s);
                r.combined_in_domain = u.in_domain(*r.combined);
            }
        }
        report.all_closed = report.all_closed && r.closed();
        report.probes.push_back(r);
    }
    return report;
}

}  // namespace fcg
