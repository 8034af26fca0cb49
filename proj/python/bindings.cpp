#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fcg/cli.hpp"
#include "fcg/coherence.hpp"
#include "fcg/combine.hpp"
#include "fcg/ergodicity.hpp"
#include "fcg/io.hpp"
#include "fcg/laws.hpp"
#include "fcg/portfolio.hpp"
#include "fcg/risk.hpp"

namespace py = pybind11;
using namespace fcg;

namespace {

std::vector<double> to_vector(std::span<const double> xs) { return {xs.begin(), xs.end()}; }

std::vector<std::vector<double>> rows(const std::vector<Gamble>& gs) {
    std::vector<std::vector<double>> out;
    for (const auto& g : gs) out.push_back(to_vector(g.rewards()));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Utility-based combination of gambles, coherence checks, induced risk and growth simulation";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<SpaceMismatch>(m, "SpaceMismatch", base.ptr());
    py::register_exception<SolverFailure>(m, "SolverFailure", base.ptr());
    py::register_exception<SizeError>(m, "SizeError", base.ptr());
    py::register_exception<ModeError>(m, "ModeError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<StateSpace>(m, "StateSpace")
        .def(py::init<std::vector<std::string>>(), py::arg("labels"))
        .def_static("anonymous", &StateSpace::anonymous, py::arg("m"))
        .def_property_readonly("labels", &StateSpace::labels)
        .def("index_of", &StateSpace::index_of)
        .def("__len__", &StateSpace::size)
        .def("__eq__", [](const StateSpace& a, const StateSpace& b) { return a == b; })
        .def("__repr__", [](const StateSpace& s) { return "StateSpace(" + py::repr(py::cast(s.labels())).cast<std::string>() + ")"; });

    py::class_<Gamble>(m, "Gamble")
        .def(py::init<StateSpace, std::vector<double>>(), py::arg("space"), py::arg("rewards"))
        .def(py::init([](std::vector<double> rewards) {
                 auto space = StateSpace::anonymous(rewards.size());
                 return Gamble(std::move(space), std::move(rewards));
             }),
             py::arg("rewards"))
        .def_static("constant", &Gamble::constant, py::arg("space"), py::arg("value"))
        .def_property_readonly("space", &Gamble::space)
        .def_property_readonly("rewards", [](const Gamble& g) { return to_vector(g.rewards()); })
        .def("__len__", &Gamble::size)
        .def("__getitem__", [](const Gamble& g, std::size_t i) {
            if (i >= g.size()) throw py::index_error();
            return g[i];
        })
        .def("__eq__", [](const Gamble& a, const Gamble& b) { return a == b; })
        .def("__repr__", [](const Gamble& g) { return "Gamble(" + py::repr(py::cast(to_vector(g.rewards()))).cast<std::string>() + ")"; });

    py::class_<ProbabilityMeasure>(m, "ProbabilityMeasure")
        .def(py::init<StateSpace, std::vector<double>>(), py::arg("space"), py::arg("weights"))
        .def_static("uniform", &ProbabilityMeasure::uniform, py::arg("space"))
        .def_property_readonly("space", &ProbabilityMeasure::space)
        .def_property_readonly("weights", [](const ProbabilityMeasure& p) { return to_vector(p.weights()); });

    m.def("expectation", &expectation, py::arg("f"), py::arg("p"));

    py::class_<UtilitySpec>(m, "UtilitySpec")
        .def_static("identity", &UtilitySpec::identity)
        .def_static("log1p", &UtilitySpec::log1p)
        .def_static("power", &UtilitySpec::power, py::arg("gamma"))
        .def_static("exponential", &UtilitySpec::exponential, py::arg("alpha"))
        .def_static("discounted", &UtilitySpec::discounted, py::arg("alpha"), py::arg("shifted") = false)
        .def_static("parse", &UtilitySpec::parse, py::arg("text"))
        .def("forward", &UtilitySpec::forward, py::arg("x"))
        .def("inverse", &UtilitySpec::inverse, py::arg("y"))
        .def_property_readonly("normalized", &UtilitySpec::normalized)
        .def("relative_risk_aversion", &UtilitySpec::relative_risk_aversion, py::arg("x"))
        .def("__str__", &UtilitySpec::to_string)
        .def("__repr__", [](const UtilitySpec& u) { return "UtilitySpec.parse('" + u.to_string() + "')"; })
        .def("__eq__", [](const UtilitySpec& a, const UtilitySpec& b) { return a == b; });

    py::class_<CombinationResult>(m, "CombinationResult")
        .def_readonly("combined", &CombinationResult::combined)
        .def_readonly("input_u_values", &CombinationResult::input_u_values)
        .def_readonly("combined_u_values", &CombinationResult::combined_u_values)
        .def_readonly("residual", &CombinationResult::residual);

    m.def("combine", &combine, py::arg("u"), py::arg("f"), py::arg("g"));
    m.def("combine_seq", [](const UtilitySpec& u, const std::vector<Gamble>& gs) { return combine_seq(u, gs); },
          py::arg("u"), py::arg("gambles"));
    m.def("log_additivity_check", &log_additivity_check, py::arg("f"), py::arg("g"));

    py::class_<AcceptanceSet>(m, "AcceptanceSet")
        .def(py::init<StateSpace, std::vector<Gamble>, UtilitySpec>(), py::arg("space"), py::arg("generators"),
             py::arg("utility"))
        .def_property_readonly("space", &AcceptanceSet::space)
        .def_property_readonly("generators", [](const AcceptanceSet& s) { return rows(s.generators()); })
        .def_property_readonly("transformed", &AcceptanceSet::transformed)
        .def_property_readonly("classical", &AcceptanceSet::classical);

    py::class_<MembershipResult>(m, "MembershipResult")
        .def_readonly("accepted", &MembershipResult::accepted)
        .def_readonly("lambda_", &MembershipResult::lambda)
        .def_readonly("slack", &MembershipResult::slack)
        .def_readonly("separator", &MembershipResult::separator)
        .def_readonly("violation", &MembershipResult::violation)
        .def_readonly("reconstruction_error", &MembershipResult::reconstruction_error);

    py::class_<PartialLossResult>(m, "PartialLossResult")
        .def_readonly("avoids", &PartialLossResult::avoids)
        .def_readonly("lambda_", &PartialLossResult::lambda)
        .def_readonly("depth", &PartialLossResult::depth);

    py::class_<RepresentingFunctional>(m, "RepresentingFunctional")
        .def_readonly("weights", &RepresentingFunctional::weights)
        .def_readonly("margin", &RepresentingFunctional::margin);

    py::class_<RepresentationResult>(m, "RepresentationResult")
        .def_readonly("functional", &RepresentationResult::functional)
        .def_readonly("best_margin", &RepresentationResult::best_margin)
        .def_property_readonly("polytope_rows", [](const RepresentationResult& r) { return r.polytope.rows; });

    m.def("cone_membership", [](const AcceptanceSet& s, const Gamble& f) { return cone_membership(s, f); },
          py::arg("set"), py::arg("f"));
    m.def("avoids_partial_loss", [](const AcceptanceSet& s) { return avoids_partial_loss(s); }, py::arg("set"));
    m.def("find_representing_functional", [](const AcceptanceSet& s) { return find_representing_functional(s); },
          py::arg("set"));
    m.def("evaluate", [](const UtilitySpec& u, const Gamble& f, const ProbabilityMeasure& p) {
        return evaluate(u, f, p).value;
    }, py::arg("u"), py::arg("f"), py::arg("p"));

    m.def("rho_power", &rho_power, py::arg("f"), py::arg("p"), py::arg("gamma"));
    m.def("rho_exponential", &rho_exponential, py::arg("f"), py::arg("p"), py::arg("alpha"));
    m.def("rho_log", &rho_log, py::arg("f"), py::arg("p"));

    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("gamble_id", &RiskReport::gamble_id)
        .def_readonly("utility", &RiskReport::utility)
        .def_readonly("rho", &RiskReport::rho)
        .def_readonly("acceptable", &RiskReport::acceptable)
        .def_readonly("expected_log_return", &RiskReport::expected_log_return)
        .def_readonly("arithmetic_expectation", &RiskReport::arithmetic_expectation)
        .def_readonly("relative_risk_aversion", &RiskReport::relative_risk_aversion);
    m.def("risk_report", &risk_report, py::arg("f"), py::arg("p"), py::arg("u"), py::arg("gamble_id") = "f");

    py::enum_<Accumulation>(m, "Accumulation")
        .value("additive", Accumulation::additive)
        .value("multiplicative", Accumulation::multiplicative);

    py::class_<TrajectoryEnsemble>(m, "TrajectoryEnsemble")
        .def_readonly("trajectories", &TrajectoryEnsemble::trajectories)
        .def_readonly("periods", &TrajectoryEnsemble::periods)
        .def_readonly("expectation_path", &TrajectoryEnsemble::expectation_path)
        .def_readonly("empirical_mean_path", &TrajectoryEnsemble::empirical_mean_path)
        .def_readonly("median_path", &TrajectoryEnsemble::median_path)
        .def_readonly("time_average_path", &TrajectoryEnsemble::time_average_path)
        .def_readonly("time_avg_growth_estimates", &TrajectoryEnsemble::time_avg_growth_estimates)
        .def_readonly("theoretical_ensemble_growth", &TrajectoryEnsemble::theoretical_ensemble_growth)
        .def_readonly("theoretical_time_growth", &TrajectoryEnsemble::theoretical_time_growth)
        .def("wealth", &TrajectoryEnsemble::wealth, py::arg("trajectory"), py::arg("period"))
        .def_property_readonly("wealth_paths", [](const TrajectoryEnsemble& e) {
            std::vector<std::vector<double>> out(e.trajectories);
            for (std::size_t k = 0; k < e.trajectories; ++k) {
                const auto* row = e.wealth_paths.data() + k * (e.periods + 1);
                out[k].assign(row, row + e.periods + 1);
            }
            return out;
        });

    m.def(
        "simulate",
        [](const Gamble& f, const ProbabilityMeasure& p, std::size_t periods, std::size_t trajectories,
           double initial_wealth, std::uint64_t seed, Accumulation mode, unsigned threads) {
            SimulationConfig cfg{f, p, periods, trajectories, initial_wealth, seed, mode, threads};
            py::gil_scoped_release release;
            return simulate(cfg);
        },
        py::arg("gamble"), py::arg("measure"), py::arg("periods"), py::arg("trajectories"),
        py::arg("initial_wealth") = 1.0, py::arg("seed") = 0, py::arg("mode") = Accumulation::multiplicative,
        py::arg("threads") = 0);

    py::class_<ExhaustivePath>(m, "ExhaustivePath")
        .def_readonly("states", &ExhaustivePath::states)
        .def_readonly("wealth", &ExhaustivePath::wealth)
        .def_readonly("probability", &ExhaustivePath::probability);
    m.def("exhaustive_paths", &exhaustive_paths, py::arg("gamble"), py::arg("measure"), py::arg("periods"),
          py::arg("initial_wealth") = 1.0, py::arg("mode") = Accumulation::multiplicative);

    py::class_<GrowthSummary>(m, "GrowthSummary")
        .def_readonly("mean", &GrowthSummary::mean)
        .def_readonly("stddev", &GrowthSummary::stddev)
        .def_readonly("standard_error", &GrowthSummary::standard_error)
        .def_readonly("theoretical_time_growth", &GrowthSummary::theoretical_time_growth)
        .def_readonly("theoretical_ensemble_growth", &GrowthSummary::theoretical_ensemble_growth)
        .def_readonly("divergence", &GrowthSummary::divergence);
    m.def("growth_rates", &growth_rates, py::arg("ensemble"));
    m.def("theoretical_ensemble_growth", &theoretical_ensemble_growth, py::arg("f"), py::arg("p"));
    m.def("theoretical_time_growth", &theoretical_time_growth, py::arg("f"), py::arg("p"));

    py::class_<LawResult>(m, "LawResult")
        .def_readonly("name", &LawResult::name)
        .def_readonly("max_residual", &LawResult::max_residual)
        .def_readonly("trials", &LawResult::trials)
        .def_readonly("passed", &LawResult::passed);
    py::class_<LawsReport>(m, "LawsReport")
        .def_readonly("laws", &LawsReport::laws)
        .def_readonly("sampler", &LawsReport::sampler)
        .def_property_readonly("passed", &LawsReport::passed);
    m.def("run_laws", &run_laws, py::arg("u"), py::arg("trials"), py::arg("seed") = 42, py::arg("tolerance") = 1e-9,
          py::arg("states") = 4);

    py::class_<StrategyStats>(m, "StrategyStats")
        .def_readonly("name", &StrategyStats::name)
        .def_readonly("arithmetic_mean", &StrategyStats::arithmetic_mean)
        .def_readonly("mean_log_return", &StrategyStats::mean_log_return)
        .def_readonly("compound_product", &StrategyStats::compound_product)
        .def_readonly("rho", &StrategyStats::rho)
        .def_readonly("acceptable", &StrategyStats::acceptable)
        .def_readonly("rank_arithmetic", &StrategyStats::rank_arithmetic)
        .def_readonly("rank_log", &StrategyStats::rank_log)
        .def_readonly("rank_compound", &StrategyStats::rank_compound);
    py::class_<PortfolioReport>(m, "PortfolioReport")
        .def_readonly("periods", &PortfolioReport::periods)
        .def_readonly("strategies", &PortfolioReport::strategies)
        .def_readonly("ranking_reversal", &PortfolioReport::ranking_reversal);
    m.def("portfolio_from_csv", [](const std::string& text, const UtilitySpec& u) {
        std::istringstream in(text);
        return portfolio(parse_returns_csv(in), u);
    }, py::arg("csv_text"), py::arg("u"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Run one gamble_calc invocation; returns (exit_code, stdout, stderr).");
}
