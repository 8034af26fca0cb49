#include "fcg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fcg::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

bool is_csv(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv";
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ParseError(std::string(what) + ": unknown key '" + key + "'");
        }
    }
}

StateSpace states_from_json(const json& j, const char* what) {
    if (!j.contains("states") || !j["states"].is_array()) {
        throw ParseError(std::string(what) + ": missing \"states\" array");
    }
    std::vector<std::string> labels;
    for (const auto& s : j["states"]) {
        if (!s.is_string()) throw ParseError(std::string(what) + ": state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    try {
        return StateSpace(std::move(labels));
    } catch (const Error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    return v.get<double>();
}

/// Values keyed by state name (any order, every state exactly once) or an
/// array in state order.
std::vector<double> state_values(const json& v, const StateSpace& space, const char* what) {
    std::vector<double> out(space.size());
    if (v.is_array()) {
        if (v.size() != space.size()) {
            throw ParseError(std::string(what) + ": expected " + std::to_string(space.size()) + " values");
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = number(v[i], what);
        return out;
    }
    if (!v.is_object()) throw ParseError(std::string(what) + ": expected object or array");
    if (v.size() != space.size()) {
        throw ParseError(std::string(what) + ": expected one value per state");
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& label = space.label(i);
        if (!v.contains(label)) throw ParseError(std::string(what) + ": no value for state '" + label + "'");
        out[i] = number(v[label], std::string(what) + " '" + label + "'");
    }
    return out;
}

struct LabeledColumn {
    std::vector<std::string> labels;
    std::vector<double> values;
};

LabeledColumn two_column_csv(std::istream& in, const char* value_header) {
    std::string line;
    std::size_t row = 0;
    LabeledColumn out;
    bool header = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (!header) {
            if (cells.size() != 2 || cells[0] != "state" || cells[1] != value_header) {
                throw ParseError("row " + std::to_string(row) + ": expected header 'state," + value_header + "'");
            }
            header = true;
            continue;
        }
        if (cells.size() != 2) throw ParseError("row " + std::to_string(row) + ": expected 2 columns");
        const auto v = parse_double(cells[1]);
        if (!v) throw ParseError("row " + std::to_string(row) + ", column 2: bad number '" + cells[1] + "'");
        out.labels.push_back(cells[0]);
        out.values.push_back(*v);
    }
    if (!header) throw ParseError("empty CSV");
    return out;
}

json number_array(std::span<const double> xs, Precision p) {
    json a = json::array();
    for (double x : xs) a.push_back(present(x, p));
    return a;
}

json maybe(const std::optional<double>& v, Precision p) {
    return v ? json(present(*v, p)) : json(nullptr);
}

}  // namespace

std::optional<double> parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double present(double v, Precision p) {
    if (p == Precision::full || !std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return *parse_double(buf);
}

std::string format_number(double v, Precision p) {
    char buf[64];
    if (p == Precision::six) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Gamble gamble_from_json(const json& j) {
    reject_unknown_keys(j, {"states", "rewards"}, "gamble");
    auto space = states_from_json(j, "gamble");
    if (!j.contains("rewards")) throw ParseError("gamble: missing \"rewards\"");
    auto rewards = state_values(j["rewards"], space, "gamble rewards");
    return Gamble(std::move(space), std::move(rewards));
}

Gamble gamble_from_csv(std::istream& in) {
    auto col = two_column_csv(in, "reward");
    try {
        return Gamble(StateSpace(std::move(col.labels)), std::move(col.values));
    } catch (const SpaceMismatch& e) {
        throw ParseError(e.what());
    }
}

Gamble load_gamble(const std::filesystem::path& path) {
    try {
        if (is_csv(path)) {
            std::ifstream in(path);
            if (!in) throw ParseError("cannot open '" + path.string() + "'");
            return gamble_from_csv(in);
        }
        return gamble_from_json(parse_json_file(path));
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path.string(), 0) == 0) throw;
        throw ParseError(path.string() + ": " + msg);
    }
}

json gamble_to_json(const Gamble& g) {
    json rewards = json::object();
    for (std::size_t i = 0; i < g.size(); ++i) rewards[g.space().label(i)] = g[i];
    return {{"states", g.space().labels()}, {"rewards", rewards}};
}

void write_gamble_csv(std::ostream& out, const Gamble& g) {
    out << "state,reward\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        out << g.space().label(i) << ',' << format_number(g[i], Precision::full) << '\n';
    }
}

ProbabilityMeasure measure_from_json(const json& j) {
    reject_unknown_keys(j, {"states", "weights"}, "measure");
    auto space = states_from_json(j, "measure");
    if (!j.contains("weights")) throw ParseError("measure: missing \"weights\"");
    auto weights = state_values(j["weights"], space, "measure weights");
    return ProbabilityMeasure(std::move(space), std::move(weights));
}

ProbabilityMeasure load_measure(const std::filesystem::path& path) {
    try {
        if (is_csv(path)) {
            std::ifstream in(path);
            if (!in) throw ParseError("cannot open '" + path.string() + "'");
            auto col = two_column_csv(in, "weight");
            return ProbabilityMeasure(StateSpace(std::move(col.labels)), std::move(col.values));
        }
        return measure_from_json(parse_json_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

json measure_to_json(const ProbabilityMeasure& p) {
    json weights = json::object();
    for (std::size_t i = 0; i < p.space().size(); ++i) weights[p.space().label(i)] = p[i];
    return {{"states", p.space().labels()}, {"weights", weights}};
}

AcceptanceSet acceptance_set_from_json(const json& j, const UtilitySpec& u) {
    reject_unknown_keys(j, {"states", "generators"}, "acceptance set");
    auto space = states_from_json(j, "acceptance set");
    std::vector<Gamble> gens;
    if (j.contains("generators")) {
        if (!j["generators"].is_array()) throw ParseError("acceptance set: \"generators\" must be an array");
        for (const auto& g : j["generators"]) gens.emplace_back(space, state_values(g, space, "generator"));
    }
    return AcceptanceSet(std::move(space), std::move(gens), u);
}

AcceptanceSet load_acceptance_set(const std::filesystem::path& path, const UtilitySpec& u) {
    try {
        return acceptance_set_from_json(parse_json_file(path), u);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<NamedGamble> gambles_from_batch_csv(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    std::optional<StateSpace> space;
    std::vector<NamedGamble> out;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (!space) {
            if (cells.size() < 2 || cells[0] != "id") {
                throw ParseError("row " + std::to_string(row) + ": expected header 'id,<state>,...'");
            }
            space.emplace(std::vector<std::string>(cells.begin() + 1, cells.end()));
            continue;
        }
        if (cells.size() != space->size() + 1) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(space->size() + 1) +
                             " columns, got " + std::to_string(cells.size()));
        }
        std::vector<double> rewards(space->size());
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto v = parse_double(cells[c]);
            if (!v) {
                throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                 ": bad number '" + cells[c] + "'");
            }
            rewards[c - 1] = *v;
        }
        out.push_back({cells[0], Gamble(*space, std::move(rewards))});
    }
    if (!space) throw ParseError("empty batch CSV");
    return out;
}

json to_json(const CombinationResult& r, Precision p) {
    json inputs = json::array();
    for (const auto& g : r.input_u_values) inputs.push_back(number_array(g.rewards(), p));
    return {
        {"utility", r.utility.to_string()},
        {"states", r.combined.space().labels()},
        {"combined", number_array(r.combined.rewards(), p)},
        {"per_state_u_values", {{"inputs", inputs}, {"combined", number_array(r.combined_u_values.rewards(), p)}}},
        {"residual", present(r.residual, p)},
    };
}

json to_json(const MembershipResult& r, Precision p) {
    json j{{"accepted", r.accepted}};
    if (r.accepted) {
        j["lambda"] = number_array(r.lambda, p);
        j["slack"] = number_array(r.slack, p);
        j["reconstruction_error"] = present(r.reconstruction_error, p);
    } else {
        j["separator"] = number_array(r.separator, p);
        j["violation"] = present(r.violation, p);
    }
    return j;
}

json to_json(const PartialLossResult& r, Precision p) {
    json j{{"avoids_partial_loss", r.avoids}, {"depth", present(r.depth, p)}};
    if (!r.avoids) j["lambda"] = number_array(r.lambda, p);
    return j;
}

json to_json(const RepresentationResult& r, Precision p) {
    json rows = json::array();
    for (const auto& row : r.polytope.rows) rows.push_back(number_array(row, p));
    json j{{"feasible", r.functional.has_value()},
           {"best_margin", maybe(r.best_margin, p)},
           {"polytope", {{"rows", rows}, {"constraints", "p >= 0, sum p = 1, row . p >= 0"}}}};
    if (r.functional) {
        j["weights"] = number_array(r.functional->weights.weights(), p);
        j["margin"] = maybe(r.functional->margin, p);
    }
    return j;
}

json to_json(const RiskReport& r, Precision p) {
    return {
        {"gamble_id", r.gamble_id},
        {"utility", r.utility.to_string()},
        {"measure", number_array(r.measure.weights(), p)},
        {"rho", present(r.rho, p)},
        {"acceptable", r.acceptable},
        {"expected_log_return", maybe(r.expected_log_return, p)},
        {"arithmetic_expectation", present(r.arithmetic_expectation, p)},
        {"relative_risk_aversion", present(r.relative_risk_aversion, p)},
    };
}

json to_json(const GrowthSummary& s, Precision p) {
    return {
        {"mean", present(s.mean, p)},
        {"stddev", present(s.stddev, p)},
        {"standard_error", present(s.standard_error, p)},
        {"theoretical_time_growth", present(s.theoretical_time_growth, p)},
        {"theoretical_ensemble_growth", present(s.theoretical_ensemble_growth, p)},
        {"divergence", present(s.divergence, p)},
    };
}

json to_json(const LawsReport& r, Precision p) {
    json laws = json::array();
    for (const auto& l : r.laws) {
        laws.push_back({{"law", l.name},
                        {"max_residual", present(l.max_residual, p)},
                        {"trials", l.trials},
                        {"passed", l.passed}});
    }
    return {{"utility", r.utility.to_string()}, {"trials", r.trials},       {"seed", r.seed},
            {"tolerance", r.tolerance},         {"sampler", r.sampler},     {"laws", laws},
            {"passed", r.passed()}};
}

json to_json(const WellBehavedReport& r, Precision p) {
    json probes = json::array();
    for (const auto& pr : r.probes) {
        probes.push_back({{"x1", present(pr.x1, p)},
                          {"x2", present(pr.x2, p)},
                          {"closed", pr.closed()},
                          {"combined", pr.combined ? json(present(*pr.combined, p)) : json(nullptr)}});
    }
    return {{"all_closed", r.all_closed}, {"symbolic", r.symbolic}, {"probes", probes}};
}

void write_trajectories_csv(std::ostream& out, const TrajectoryEnsemble& ens, Precision p) {
    out << "trajectory,period,wealth\n";
    for (std::size_t k = 0; k < ens.trajectories; ++k) {
        for (std::size_t t = 0; t <= ens.periods; ++t) {
            out << k << ',' << t << ',' << format_number(ens.wealth(k, t), p) << '\n';
        }
    }
}

void write_exhaustive_csv(std::ostream& out, const std::vector<ExhaustivePath>& paths, Precision p) {
    out << "path,probability,period,wealth\n";
    for (std::size_t k = 0; k < paths.size(); ++k) {
        for (std::size_t t = 0; t < paths[k].wealth.size(); ++t) {
            out << k << ',' << format_number(paths[k].probability, p) << ',' << t << ','
                << format_number(paths[k].wealth[t], p) << '\n';
        }
    }
}

void write_growth_svg(std::ostream& out, const TrajectoryEnsemble& ens, Precision p) {
    constexpr double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
    const std::size_t n = ens.periods;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    for (const auto* curve : {&ens.expectation_path, &ens.median_path}) {
        for (double v : *curve) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (ymax == ymin) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    auto sx = [&](std::size_t t) { return L + (W - L - R) * static_cast<double>(t) / static_cast<double>(n); };
    auto sy = [&](double v) { return H - B - (H - T - B) * (v - ymin) / (ymax - ymin); };
    char buf[64];
    auto coord = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">period</text>\n";
    out << "  <text x=\"15\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 15 " << (T + H - B) / 2
        << ")\" text-anchor=\"middle\">wealth</text>\n";
    out << "  <text x=\"" << L - 5 << "\" y=\"" << coord(sy(ymin)) << "\" text-anchor=\"end\">"
        << format_number(ymin, Precision::six) << "</text>\n";
    out << "  <text x=\"" << L - 5 << "\" y=\"" << coord(sy(ymax)) << "\" text-anchor=\"end\">"
        << format_number(ymax, Precision::six) << "</text>\n";
    out << "  <text x=\"" << L << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">0</text>\n";
    out << "  <text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << n << "</text>\n";

    auto curve = [&](const char* id, const std::vector<double>& ys, const char* dash, const char* color) {
        out << "  <g id=\"" << id << "\">\n    <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
            << dash << " points=\"";
        for (std::size_t t = 0; t < ys.size(); ++t) out << (t ? " " : "") << coord(sx(t)) << ',' << coord(sy(ys[t]));
        out << "\"/>\n";
        for (std::size_t t = 0; t < ys.size(); ++t) {
            out << "    <circle r=\"1.5\" fill=\"" << color << "\" cx=\"" << coord(sx(t)) << "\" cy=\""
                << coord(sy(ys[t])) << "\" data-period=\"" << t << "\" data-wealth=\"" << format_number(ys[t], p)
                << "\"/>\n";
        }
        out << "  </g>\n";
    };
    curve("expectation", ens.expectation_path, " stroke-dasharray=\"6 4\"", "#1f77b4");
    curve("median", ens.median_path, "", "#d62728");

    const double lx = L + 15, ly = T + 10;
    out << "  <g id=\"legend\">\n";
    out << "    <line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly
        << "\" stroke=\"#1f77b4\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
    out << "    <text x=\"" << lx + 36 << "\" y=\"" << ly + 4 << "\">expectation (ensemble average)</text>\n";
    out << "    <line x1=\"" << lx << "\" y1=\"" << ly + 18 << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly + 18
        << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    out << "    <text x=\"" << lx + 36 << "\" y=\"" << ly + 22 << "\">median path (time average)</text>\n";
    out << "  </g>\n</svg>\n";
}

}  // namespace fcg::io
