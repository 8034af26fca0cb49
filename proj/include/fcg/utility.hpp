#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcg/errors.hpp"

namespace fcg {

enum class UtilityKind { identity, discounted, log1p, power, exponential };

/// A strictly increasing, continuous transform u with its inverse and domain.
///
/// Kinds and parameters:
///   identity          u(x) = x
///   log1p             u(x) = log(1+x),            x > -1
///   power(g)          u(x) = x^g / g,             x >= 0,  g > 0
///   exponential(a)    u(x) = 1 - exp(-a x),       a > 0
///   discounted(a)     u(x) = (x^(1-a) - a)/(1-a), x > 0,   0 <= a < 1
///
/// Raw discounted utility has u(0) != 0 for a > 0 and is therefore not usable
/// as a combination operator. The shifted variant adds a/(1-a), which
/// restores u(0) = 0 and extends the domain to x >= 0.
class UtilitySpec {
public:
    static UtilitySpec identity() { return UtilitySpec(UtilityKind::identity, 0.0, false); }
    static UtilitySpec log1p() { return UtilitySpec(UtilityKind::log1p, 0.0, false); }
    static UtilitySpec power(double gamma);
    static UtilitySpec exponential(double alpha);
    static UtilitySpec discounted(double alpha, bool shifted = false);

    /// Parses "identity", "log1p", "power:G", "exp:A", "discounted:A" and
    /// "discounted-shifted:A". Locale-independent.
    static UtilitySpec parse(std::string_view text);

    [[nodiscard]] UtilityKind kind() const noexcept { return kind_; }
    [[nodiscard]] double parameter() const noexcept { return param_; }
    [[nodiscard]] bool shifted() const noexcept { return shifted_; }

    /// Round-trips through parse().
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] bool in_domain(double x) const noexcept;
    [[nodiscard]] bool in_range(double y) const noexcept;
    /// Human-readable bound, e.g. "x > -1".
    [[nodiscard]] std::string domain_text() const;
    [[nodiscard]] std::string range_text() const;

    /// u(0) = 0 holds.
    [[nodiscard]] bool normalized() const noexcept;
    /// Raw discounted utility is excluded from combination.
    [[nodiscard]] bool combinable() const noexcept { return normalized(); }

    /// Throws DomainError when x is outside the domain.
    [[nodiscard]] double forward(double x) const;
    /// Throws RangeError when y is outside the range.
    [[nodiscard]] double inverse(double y) const;

    /// Arrow-Pratt relative risk aversion -x u''(x)/u'(x) at x.
    [[nodiscard]] double relative_risk_aversion(double x) const;

    friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;

private:
    UtilitySpec(UtilityKind k, double p, bool s) : kind_(k), param_(p), shifted_(s) {}

    UtilityKind kind_;
    double param_;
    bool shifted_;
};

struct ProbeResult {
    double x1 = 0.0;
    double x2 = 0.0;
    bool inputs_in_domain = false;
    bool sum_in_range = false;
    std::optional<double> combined;  // u^-1(u(x1)+u(x2)) when it exists
    bool combined_in_domain = false;
    [[nodiscard]] bool closed() const noexcept {
        return inputs_in_domain && sum_in_range && combined_in_domain;
    }
};

struct WellBehavedReport {
    std::vector<ProbeResult> probes;
    bool all_closed = true;
    /// Closed-form statement of where u(x1)+u(x2) stays in range.
    std::string symbolic;
};

/// Checks closure of the range of u under addition on the given probe pairs.
/// Failures are reported, never thrown.
WellBehavedReport check_well_behaved(const UtilitySpec& u,
                                     const std::vector<std::pair<double, double>>& probes);

}  // namespace fcg
