#include "fcg/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>

#include "fcg/core.hpp"
#include "fcg/io.hpp"
#include "fcg/numeric.hpp"
#include "fcg/risk.hpp"

namespace fcg {

ReturnTable parse_returns_csv(std::istream& in) {
    ReturnTable table;
    std::string line;
    std::size_t row = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto cells = io::split_csv_line(line);
        if (!header) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (cells[c].empty()) {
                    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                     ": empty strategy name");
                }
            }
            table.strategies = cells;
            table.returns.resize(cells.size());
            header = true;
            continue;
        }
        if (cells.size() != table.strategies.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(table.strategies.size()) +
                             " columns, got " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = io::parse_double(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                 ": bad number '" + cells[c] + "'");
            }
            table.returns[c].push_back(*v);
        }
    }
    if (!header) throw ParseError("row 1: missing header");
    if (table.returns.front().empty()) throw ParseError("row 2: no return rows");
    return table;
}

namespace {

// Rank 1 for the largest value; ties keep column order.
template <class Key>
void assign_ranks(std::vector<StrategyStats>& stats, Key key, std::size_t StrategyStats::*rank) {
    std::vector<std::size_t> order(stats.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(stats[a]) > key(stats[b]); });
    for (std::size_t r = 0; r < order.size(); ++r) stats[order[r]].*rank = r + 1;
}

}  // namespace

PortfolioReport portfolio(const ReturnTable& table, const UtilitySpec& u) {
    PortfolioReport report{u, 0, {}, false};
    report.periods = table.returns.empty() ? 0 : table.returns.front().size();
    std::vector<std::string> labels;
    for (std::size_t t = 0; t < report.periods; ++t) labels.push_back("t" + std::to_string(t + 1));
    const StateSpace space(labels);
    const auto uniform = ProbabilityMeasure::uniform(space);
    const double n = static_cast<double>(report.periods);

    bool all_log = true;
    for (std::size_t s = 0; s < table.strategies.size(); ++s) {
        const auto& r = table.returns[s];
        StrategyStats st;
        st.name = table.strategies[s];
        st.arithmetic_mean = neumaier_sum(r) / n;
        const bool growth_ok = std::all_of(r.begin(), r.end(), [](double x) { return x > -1.0; });
        if (growth_ok) {
            NeumaierAccumulator acc;
            for (double x : r) acc.add(std::log1p(x));
            st.mean_log_return = acc.value() / n;
        }
        all_log = all_log && growth_ok;
        for (double x : r) st.compound_product *= 1.0 + x;
        const auto rep = risk_report(Gamble(space, r), uniform, u, st.name);
        st.rho = rep.rho;
        st.acceptable = rep.acceptable;
        report.strategies.push_back(std::move(st));
    }

    assign_ranks(report.strategies, [](const StrategyStats& s) { return s.arithmetic_mean; },
                 &StrategyStats::rank_arithmetic);
    assign_ranks(report.strategies, [](const StrategyStats& s) { return s.compound_product; },
                 &StrategyStats::rank_compound);
    if (all_log) {
        assign_ranks(report.strategies, [](const StrategyStats& s) { return *s.mean_log_return; },
                     &StrategyStats::rank_log);
        report.ranking_reversal = std::any_of(report.strategies.begin(), report.strategies.end(),
                                              [](const StrategyStats& s) { return s.rank_log != s.rank_arithmetic; });
    }
    return report;
}

}  // namespace fcg
