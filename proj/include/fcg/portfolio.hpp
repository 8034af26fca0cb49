#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fcg/utility.hpp"

namespace fcg {

/// Per-period returns, one column per strategy.
struct ReturnTable {
    std::vector<std::string> strategies;
    std::vector<std::vector<double>> returns;  // returns[strategy][period]
};

/// Header row of strategy names, then one row per period. Throws ParseError
/// with the row and column of the first bad cell.
ReturnTable parse_returns_csv(std::istream& in);

struct StrategyStats {
    std::string name;
    double arithmetic_mean = 0.0;
    std::optional<double> mean_log_return;  // absent if some return <= -1
    double compound_product = 1.0;          // prod (1 + r_t)
    double rho = 0.0;                       // induced risk, uniform weights over periods
    bool acceptable = false;
    // 1 = best.
    std::size_t rank_arithmetic = 0;
    std::size_t rank_log = 0;
    std::size_t rank_compound = 0;
};

struct PortfolioReport {
    UtilitySpec utility;
    std::size_t periods = 0;
    std::vector<StrategyStats> strategies;
    /// The arithmetic-mean ranking and the mean-log-return ranking disagree.
    bool ranking_reversal = false;
};

/// Treats each historical period as an equally likely state.
PortfolioReport portfolio(const ReturnTable& table, const UtilitySpec& u);

}  // namespace fcg
