#include "fcg/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcg/coherence.hpp"
#include "fcg/combine.hpp"
#include "fcg/ergodicity.hpp"
#include "fcg/io.hpp"
#include "fcg/laws.hpp"
#include "fcg/portfolio.hpp"
#include "fcg/risk.hpp"

namespace fcg::cli {

namespace {

using io::json;
using io::Precision;

const char* const kTolerances[] = {"separation_margin", "witness_tol", "sure_loss_eps", "lp_feasibility_tol", "laws"};

struct Invocation {
    CliConfig config;
    Precision precision = Precision::six;
    std::ostream& out;
    std::ostream& err;

    [[nodiscard]] UtilitySpec utility() const { return UtilitySpec::parse(config.utility); }

    [[nodiscard]] CoherenceOptions coherence_options() const {
        CoherenceOptions o;
        auto take = [&](const char* key, double& field) {
            if (auto it = config.tolerances.find(key); it != config.tolerances.end()) field = it->second;
        };
        take("separation_margin", o.separation_margin);
        take("witness_tol", o.witness_tol);
        take("sure_loss_eps", o.sure_loss_eps);
        take("lp_feasibility_tol", o.lp_feasibility_tol);
        return o;
    }

    [[nodiscard]] double laws_tolerance() const {
        auto it = config.tolerances.find("laws");
        return it == config.tolerances.end() ? 1e-9 : it->second;
    }

    void emit(const json& j) const { out << j.dump(2) << '\n'; }
};

/// First non-blank line of a CSV file.
std::string csv_header(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    return {};
}

bool is_batch_csv(const std::filesystem::path& path) {
    if (path.extension() != ".csv") return false;
    const auto cells = io::split_csv_line(csv_header(path));
    return !cells.empty() && cells.front() == "id";
}

int do_combine(const Invocation& inv, const std::vector<std::string>& files) {
    std::vector<Gamble> gambles;
    for (const auto& f : files) gambles.push_back(io::load_gamble(f));
    const auto r = combine_seq(inv.utility(), gambles);
    if (inv.config.format == "csv") {
        io::write_gamble_csv(inv.out, r.combined);
    } else {
        inv.emit(io::to_json(r, inv.precision));
    }
    return kOk;
}

int do_check(const Invocation& inv, const std::string& set_path, const std::string& gamble_path) {
    const auto u = inv.utility();
    const auto set = io::load_acceptance_set(set_path, u);
    const auto opt = inv.coherence_options();
    const auto loss = avoids_partial_loss(set, opt);
    const auto rep = find_representing_functional(set, opt);
    json j{{"utility", u.to_string()},
           {"mode", set.classical() ? "classical" : "function-coherent"},
           {"states", set.space().labels()},
           {"generators", set.generators().size()},
           {"coherent", loss.avoids},
           {"partial_loss", io::to_json(loss, inv.precision)},
           {"representing_functional", io::to_json(rep, inv.precision)}};
    bool positive = loss.avoids;
    if (!gamble_path.empty()) {
        const auto f = io::load_gamble(gamble_path);
        const auto m = cone_membership(set, f, opt);
        j["membership"] = io::to_json(m, inv.precision);
        positive = positive && m.accepted;
    }
    inv.emit(j);
    return positive ? kOk : kNegative;
}

ProbabilityMeasure resolve_measure(const Invocation& inv, const std::string& measure_path,
                                   const std::string& set_path, const StateSpace& space) {
    if (!measure_path.empty()) {
        auto p = io::load_measure(measure_path);
        require_same_space(space, p.space(), "measure");
        return p;
    }
    if (set_path.empty()) throw ParseError("risk: need --measure or --set");
    const auto set = io::load_acceptance_set(set_path, inv.utility());
    require_same_space(space, set.space(), "acceptance set");
    auto rep = find_representing_functional(set, inv.coherence_options());
    if (!rep.functional) throw Error("risk: acceptance set incurs partial loss; no representing functional");
    return rep.functional->weights;
}

int do_risk(const Invocation& inv, const std::string& path, const std::string& measure_path,
            const std::string& set_path) {
    const auto u = inv.utility();
    if (is_batch_csv(path)) {
        std::ifstream in(path);
        const auto batch = io::gambles_from_batch_csv(in);
        if (batch.empty()) throw ParseError(path + ": no gamble rows");
        const auto p = resolve_measure(inv, measure_path, set_path, batch.front().gamble.space());
        bool all_ok = true;
        std::vector<RiskReport> reports;
        for (const auto& g : batch) {
            reports.push_back(risk_report(g.gamble, p, u, g.id));
            all_ok = all_ok && reports.back().acceptable;
        }
        if (inv.config.format == "csv") {
            inv.out << "id,rho,acceptable,expected_log_return,arithmetic_expectation\n";
            for (const auto& r : reports) {
                inv.out << r.gamble_id << ',' << io::format_number(r.rho, inv.precision) << ','
                        << (r.acceptable ? "true" : "false") << ','
                        << (r.expected_log_return ? io::format_number(*r.expected_log_return, inv.precision) : "")
                        << ',' << io::format_number(r.arithmetic_expectation, inv.precision) << '\n';
            }
        } else {
            json arr = json::array();
            for (const auto& r : reports) arr.push_back(io::to_json(r, inv.precision));
            inv.emit(arr);
        }
        return all_ok ? kOk : kNegative;
    }
    const auto f = io::load_gamble(path);
    const auto p = resolve_measure(inv, measure_path, set_path, f.space());
    const auto r = risk_report(f, p, u, std::filesystem::path(path).stem().string());
    inv.emit(io::to_json(r, inv.precision));
    return r.acceptable ? kOk : kNegative;
}

struct SimulateArgs {
    std::string gamble, measure, mode = "multiplicative", out, svg;
    std::size_t periods = 30, trajectories = 1000;
    std::uint64_t seed = 42;
    double w0 = 100.0;
    unsigned threads = 0;
    bool exhaustive = false;
};

int do_simulate(const Invocation& inv, const SimulateArgs& a) {
    const auto g = io::load_gamble(a.gamble);
    const auto p = a.measure.empty() ? ProbabilityMeasure::uniform(g.space()) : io::load_measure(a.measure);
    const auto mode = a.mode == "additive" ? Accumulation::additive : Accumulation::multiplicative;
    auto open_out = [](const std::string& path) {
        std::ofstream f(path);
        if (!f) throw ParseError("cannot write '" + path + "'");
        return f;
    };

    if (a.exhaustive) {
        const auto paths = exhaustive_paths(g, p, a.periods, a.w0, mode);
        if (!a.out.empty()) {
            auto f = open_out(a.out);
            io::write_exhaustive_csv(f, paths, inv.precision);
        }
        json finals = json::array();
        for (const auto& path : paths) {
            finals.push_back({{"states", path.states},
                              {"probability", io::present(path.probability, inv.precision)},
                              {"final_wealth", io::present(path.wealth.back(), inv.precision)}});
        }
        inv.emit({{"mode", a.mode}, {"periods", a.periods}, {"initial_wealth", a.w0}, {"paths", finals}});
        return kOk;
    }

    SimulationConfig cfg{g, p, a.periods, a.trajectories, a.w0, a.seed, mode, a.threads};
    const auto ens = simulate(cfg);
    if (!a.out.empty()) {
        auto f = open_out(a.out);
        io::write_trajectories_csv(f, ens, inv.precision);
    }
    if (!a.svg.empty()) {
        auto f = open_out(a.svg);
        io::write_growth_svg(f, ens, inv.precision);
    }
    auto arr = [&](const std::vector<double>& xs) {
        json j = json::array();
        for (double x : xs) j.push_back(io::present(x, inv.precision));
        return j;
    };
    std::vector<double> sample(ens.periods + 1);
    for (std::size_t t = 0; t <= ens.periods; ++t) sample[t] = ens.wealth(0, t);
    json j{{"mode", a.mode},
           {"periods", a.periods},
           {"trajectories", a.trajectories},
           {"seed", a.seed},
           {"initial_wealth", a.w0},
           {"expectation_path", arr(ens.expectation_path)},
           {"empirical_mean_path", arr(ens.empirical_mean_path)},
           {"median_path", arr(ens.median_path)},
           {"sample_path", arr(sample)}};
    if (mode == Accumulation::multiplicative) {
        j["time_average_path"] = arr(ens.time_average_path);
        j["growth"] = io::to_json(growth_rates(ens), inv.precision);
    }
    inv.emit(j);
    return kOk;
}

int do_portfolio(const Invocation& inv, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    ReturnTable table;
    try {
        table = parse_returns_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
    const auto rep = portfolio(table, inv.utility());
    bool all_ok = true;
    for (const auto& s : rep.strategies) all_ok = all_ok && s.acceptable;
    const auto pr = inv.precision;
    if (inv.config.format == "csv") {
        inv.out << "strategy,arithmetic_mean,mean_log_return,compound_product,rho,acceptable,"
                   "rank_arithmetic,rank_log,rank_compound\n";
        for (const auto& s : rep.strategies) {
            inv.out << s.name << ',' << io::format_number(s.arithmetic_mean, pr) << ','
                    << (s.mean_log_return ? io::format_number(*s.mean_log_return, pr) : "") << ','
                    << io::format_number(s.compound_product, pr) << ',' << io::format_number(s.rho, pr) << ','
                    << (s.acceptable ? "true" : "false") << ',' << s.rank_arithmetic << ',' << s.rank_log << ','
                    << s.rank_compound << '\n';
        }
    } else {
        json arr = json::array();
        for (const auto& s : rep.strategies) {
            arr.push_back({{"strategy", s.name},
                           {"arithmetic_mean", io::present(s.arithmetic_mean, pr)},
                           {"mean_log_return",
                            s.mean_log_return ? json(io::present(*s.mean_log_return, pr)) : json(nullptr)},
                           {"compound_product", io::present(s.compound_product, pr)},
                           {"rho", io::present(s.rho, pr)},
                           {"acceptable", s.acceptable},
                           {"rank_arithmetic", s.rank_arithmetic},
                           {"rank_log", s.rank_log},
                           {"rank_compound", s.rank_compound}});
        }
        inv.emit({{"utility", rep.utility.to_string()},
                  {"periods", rep.periods},
                  {"strategies", arr},
                  {"ranking_reversal", rep.ranking_reversal}});
    }
    return all_ok ? kOk : kNegative;
}

int do_laws(const Invocation& inv, std::size_t trials) {
    const auto u = inv.utility();
    const auto seed = inv.config.seed.value_or(42);
    const auto report = run_laws(u, trials, seed, inv.laws_tolerance());
    const auto box = closed_sample_box(u);
    const auto wb = check_well_behaved(u, {{box.lo, box.lo}, {box.lo, box.hi}, {box.hi, box.hi}});
    auto j = io::to_json(report, inv.precision);
    j["well_behaved"] = io::to_json(wb, inv.precision);
    inv.emit(j);
    return report.passed() ? kOk : kNegative;
}

}  // namespace

CliConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("config: expected a JSON object");
    CliConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "utility") {
            if (!value.is_string()) throw ParseError("config: 'utility' must be a string");
            cfg.utility = value.get<std::string>();
            UtilitySpec::parse(cfg.utility);
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw ParseError("config: 'seed' must be a nonnegative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "format") {
            if (!value.is_string() || (value != "json" && value != "csv")) {
                throw ParseError("config: 'format' must be \"json\" or \"csv\"");
            }
            cfg.format = value.get<std::string>();
        } else if (key == "tolerances") {
            if (!value.is_object()) throw ParseError("config: 'tolerances' must be an object");
            for (const auto& [name, tol] : value.items()) {
                if (std::find(std::begin(kTolerances), std::end(kTolerances), name) == std::end(kTolerances)) {
                    throw ParseError("config: unknown tolerance '" + name + "'");
                }
                if (!tol.is_number() || !(tol.get<double>() > 0.0)) {
                    throw ParseError("config: tolerance '" + name + "' must be a positive number");
                }
                cfg.tolerances[name] = tol.get<double>();
            }
        } else {
            throw ParseError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Function-coherent gambles: combination, coherence, risk and growth simulation"};
    app.name("gamble_calc");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, precision = "6", utility, format;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config file (also GAMBLE_CALC_CONFIG)");
    app.add_option("--precision", precision, "Numeric output precision")->check(CLI::IsMember({"6", "full"}));
    auto* utility_opt = app.add_option("--utility", utility, "identity | log1p | power:G | exp:A | discounted:A | discounted-shifted:A");
    auto* format_opt = app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");

    auto* combine_cmd = app.add_subcommand("combine", "Combine gambles with u^-1(u(f) + u(g))");
    std::vector<std::string> combine_files;
    combine_cmd->add_option("files", combine_files, "Gamble files (JSON or CSV)")->required();

    auto* check_cmd = app.add_subcommand("check", "Coherence of an acceptance set and membership of a gamble");
    std::string set_path, gamble_path;
    check_cmd->add_option("--set", set_path, "Acceptance set JSON")->required();
    check_cmd->add_option("--gamble", gamble_path, "Gamble to test for membership");

    auto* risk_cmd = app.add_subcommand("risk", "Induced risk report");
    std::string risk_file, measure_path, risk_set;
    risk_cmd->add_option("gamble", risk_file, "Gamble file, or batch CSV with header id,<states>")->required();
    risk_cmd->add_option("--measure", measure_path, "Probability measure file");
    risk_cmd->add_option("--set", risk_set, "Acceptance set whose max-margin functional is used as the measure");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo ensemble vs time-average growth");
    SimulateArgs sim;
    sim_cmd->add_option("--gamble", sim.gamble, "Gamble file")->required();
    sim_cmd->add_option("--measure", sim.measure, "Probability measure file (default uniform)");
    sim_cmd->add_option("--periods", sim.periods)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--trajectories", sim.trajectories)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--mode", sim.mode)->check(CLI::IsMember({"additive", "multiplicative"}));
    sim_cmd->add_option("--w0", sim.w0, "Initial wealth");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = auto)");
    sim_cmd->add_option("--out", sim.out, "Trajectory CSV path");
    sim_cmd->add_option("--svg", sim.svg, "Growth plot SVG path");
    sim_cmd->add_flag("--exhaustive", sim.exhaustive, "Enumerate all m^n paths instead of sampling");

    auto* port_cmd = app.add_subcommand("portfolio", "Compare strategies from historical returns");
    std::string returns_path;
    port_cmd->add_option("returns", returns_path, "CSV: header of strategy names, one row per period")->required();

    auto* laws_cmd = app.add_subcommand("laws", "Randomized check of the combination operator's laws");
    std::size_t trials = 10000;
    laws_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        Invocation inv{CliConfig{}, precision == "full" ? Precision::full : Precision::six, out, err};
        if (config_path.empty()) {
            if (const char* env = std::getenv("GAMBLE_CALC_CONFIG"); env && *env) config_path = env;
        }
        if (!config_path.empty()) inv.config = load_config(config_path);
        if (utility_opt->count()) inv.config.utility = utility;
        if (format_opt->count()) inv.config.format = format;
        if (seed_opt->count()) inv.config.seed = seed;

        if (combine_cmd->parsed()) return do_combine(inv, combine_files);
        if (check_cmd->parsed()) return do_check(inv, set_path, gamble_path);
        if (risk_cmd->parsed()) return do_risk(inv, risk_file, measure_path, risk_set);
        if (sim_cmd->parsed()) {
            if (inv.config.seed) sim.seed = *inv.config.seed;
            return do_simulate(inv, sim);
        }
        if (port_cmd->parsed()) return do_portfolio(inv, returns_path);
        if (laws_cmd->parsed()) return do_laws(inv, trials);
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << '\n';
        return kSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace fcg::cli
