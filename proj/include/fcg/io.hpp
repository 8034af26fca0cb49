#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fcg/coherence.hpp"
#include "fcg/combine.hpp"
#include "fcg/core.hpp"
#include "fcg/ergodicity.hpp"
#include "fcg/laws.hpp"
#include "fcg/risk.hpp"

namespace fcg::io {

using nlohmann::json;

enum class Precision { six, full };

/// Rounds to 6 significant digits (Precision::six) or returns v unchanged.
/// Values emitted as JSON pass through here so that re-parsing the text
/// reproduces them exactly.
double present(double v, Precision p);
/// Text form consistent with present(): "%.6g" or shortest round-trip.
std::string format_number(double v, Precision p);

// Gamble files: {"states": [...], "rewards": {state: x}} (rewards may also be
// an array in state order), or CSV with header "state,reward".
Gamble gamble_from_json(const json& j);
Gamble gamble_from_csv(std::istream& in);
Gamble load_gamble(const std::filesystem::path& path);
json gamble_to_json(const Gamble& g);
void write_gamble_csv(std::ostream& out, const Gamble& g);

// Measure files: {"states": [...], "weights": {state: p}} or CSV "state,weight".
ProbabilityMeasure measure_from_json(const json& j);
ProbabilityMeasure load_measure(const std::filesystem::path& path);
json measure_to_json(const ProbabilityMeasure& p);

/// {"states": [...], "generators": [[...], ...]}
AcceptanceSet acceptance_set_from_json(const json& j, const UtilitySpec& u);
AcceptanceSet load_acceptance_set(const std::filesystem::path& path, const UtilitySpec& u);

struct NamedGamble {
    std::string id;
    Gamble gamble;
};
/// Batch CSV: header "id,<state>,<state>...", one gamble per row.
std::vector<NamedGamble> gambles_from_batch_csv(std::istream& in);

json to_json(const CombinationResult& r, Precision p);
json to_json(const MembershipResult& r, Precision p);
json to_json(const PartialLossResult& r, Precision p);
json to_json(const RepresentationResult& r, Precision p);
json to_json(const RiskReport& r, Precision p);
json to_json(const GrowthSummary& s, Precision p);
json to_json(const LawsReport& r, Precision p);
json to_json(const WellBehavedReport& r, Precision p);

/// "trajectory,period,wealth" rows.
void write_trajectories_csv(std::ostream& out, const TrajectoryEnsemble& ens, Precision p);
/// "path,probability,period,wealth" rows.
void write_exhaustive_csv(std::ostream& out, const std::vector<ExhaustivePath>& paths, Precision p);

/// Two-curve growth plot: dashed expectation curve and solid median path.
/// Each point carries data-period / data-wealth attributes formatted exactly
/// as in the CSV.
void write_growth_svg(std::ostream& out, const TrajectoryEnsemble& ens, Precision p);

/// Splits one CSV line on commas, trimming surrounding blanks.
std::vector<std::string> split_csv_line(const std::string& line);
/// Locale-independent strict double parse; nullopt on failure.
std::optional<double> parse_double(std::string_view text);

}  // namespace fcg::io
