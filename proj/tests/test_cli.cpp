#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcg/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("fcg_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = fcg::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* const kOptionA = R"({"states":["up","down"],"rewards":{"up":0.5,"down":-0.4}})";
const char* const kOptionB = R"({"states":["up","down"],"rewards":{"up":0.05,"down":0.05}})";
const char* const kHalf = R"({"states":["up","down"],"weights":{"up":0.5,"down":0.5}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("combine") {
    TempDir d;
    const auto a = d.write("a.json", R"({"states":["s"],"rewards":[0.10]})");
    const auto b = d.write("b.json", R"({"states":["s"],"rewards":[0.20]})");
    auto r = run({"combine", "--utility", "log1p", a, b});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["combined"][0].get<double>() == doctest::Approx(0.32));
    CHECK(j["utility"] == "log1p");

    r = run({"--precision", "full", "combine", a, b});
    j = json::parse(r.out);
    CHECK(std::abs(j["combined"][0].get<double>() - 0.32) <= 1e-12);
    CHECK(j["per_state_u_values"]["combined"][0].get<double>() == doctest::Approx(0.2776317365982795));

    CHECK(run({"combine", a, d.file("missing.json")}).code == 2);
    CHECK(run({"combine", "--utility", "discounted:0.5", a, b}).code == 2);
    const auto bad = d.write("bad.json", R"({"states":["s"],"rewards":[-2]})");
    r = run({"combine", a, bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("state 's'") != std::string::npos);

    r = run({"--format", "csv", "combine", a, b});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("state,reward\ns,0.32", 0) == 0);
}

TEST_CASE("check") {
    TempDir d;
    const auto ok = d.write("ok.json", R"({"states":["x","y"],"generators":[[1,-1]]})");
    const auto loss = d.write("loss.json", R"({"states":["x","y"],"generators":[[-0.1,-0.2]]})");
    const auto in = d.write("in.json", R"({"states":["x","y"],"rewards":[2,-2]})");
    const auto out = d.write("out.json", R"({"states":["x","y"],"rewards":[-1,-1]})");

    auto r = run({"check", "--utility", "identity", "--set", ok});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["coherent"] == true);
    CHECK(j["mode"] == "classical");
    CHECK(j["representing_functional"]["feasible"] == true);

    r = run({"check", "--utility", "identity", "--set", ok, "--gamble", in});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["membership"]["accepted"] == true);

    r = run({"check", "--utility", "identity", "--set", ok, "--gamble", out});
    CHECK(r.code == 1);
    j = json::parse(r.out);
    CHECK(j["membership"]["accepted"] == false);
    CHECK(j["membership"]["violation"].get<double>() < 0.0);

    r = run({"check", "--utility", "identity", "--set", loss});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["coherent"] == false);

    CHECK(run({"check"}).code == 2);
    CHECK(run({"check", "--set", d.file("nope.json")}).code == 2);
}

TEST_CASE("risk") {
    TempDir d;
    const auto a = d.write("optionA.json", kOptionA);
    const auto b = d.write("optionB.json", kOptionB);
    const auto p = d.write("p.json", kHalf);

    auto r = run({"risk", "--utility", "log1p", "--measure", p, a});
    CHECK(r.code == 1);
    auto j = json::parse(r.out);
    CHECK(j["gamble_id"] == "optionA");
    CHECK(j["rho"].get<double>() == doctest::Approx(0.05268));
    CHECK(j["acceptable"] == false);

    r = run({"risk", "--measure", p, b});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["rho"].get<double>() == doctest::Approx(-0.04879));

    CHECK(run({"risk", "--utility", "identity", "--measure", p, a}).code == 0);
    CHECK(run({"risk", a}).code == 2);

    const auto set = d.write("set.json", R"({"states":["up","down"],"generators":[[0.5,-0.1]]})");
    r = run({"risk", "--set", set, b});
    CHECK(r.code == 0);

    const auto batch = d.write("batch.csv", "id,up,down\nA,0.5,-0.4\nB,0.05,0.05\n");
    r = run({"risk", "--measure", p, batch});
    CHECK(r.code == 1);
    j = json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 2);
    CHECK(j[1]["gamble_id"] == "B");

    r = run({"--format", "csv", "risk", "--measure", p, batch});
    CHECK(r.out.rfind("id,rho,acceptable", 0) == 0);
}

TEST_CASE("simulate") {
    TempDir d;
    const auto a = d.write("a.json", kOptionA);
    const auto csv = d.file("traj.csv");
    const auto svg = d.file("fig.svg");

    auto r = run({"simulate", "--gamble", a, "--periods", "10", "--trajectories", "200", "--out", csv, "--svg", svg});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["seed"] == 42);
    CHECK(j["median_path"].size() == 11);
    CHECK(j["growth"]["theoretical_time_growth"].get<double>() == doctest::Approx(-0.0526803));
    CHECK(fs::exists(csv));
    CHECK(fs::exists(svg));

    const auto again = run({"simulate", "--gamble", a, "--periods", "10", "--trajectories", "200"});
    CHECK(again.out == r.out);
    const auto other = run({"--seed", "7", "simulate", "--gamble", a, "--periods", "10", "--trajectories", "200"});
    CHECK(json::parse(other.out)["seed"] == 7);

    r = run({"simulate", "--gamble", a, "--periods", "2", "--exhaustive", "--out", d.file("ex.csv")});
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    REQUIRE(j["paths"].size() == 4);
    CHECK(j["paths"][0]["final_wealth"].get<double>() == doctest::Approx(225.0));
    CHECK(j["paths"][3]["final_wealth"].get<double>() == doctest::Approx(36.0));

    r = run({"simulate", "--gamble", a, "--mode", "additive", "--periods", "3", "--trajectories", "5"});
    CHECK(r.code == 0);
    CHECK_FALSE(json::parse(r.out).contains("growth"));

    CHECK(run({"simulate", "--gamble", a, "--mode", "sideways"}).code == 2);
    CHECK(run({"simulate", "--gamble", a, "--periods", "0"}).code == 2);
    const auto ruin = d.write("ruin.json", R"({"states":["u","d"],"rewards":[0.5,-1.0]})");
    CHECK(run({"simulate", "--gamble", ruin}).code == 2);
}

TEST_CASE("portfolio") {
    TempDir d;
    const auto good = d.write("r.csv", "f,g\n0.08,0.04\n-0.03,0.03\n0.12,0.05\n0.05,0.04\n-0.02,0.03\n");
    auto r = run({"--precision", "full", "portfolio", good});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["strategies"][0]["arithmetic_mean"].get<double>() == doctest::Approx(0.04));
    CHECK(std::abs(j["strategies"][1]["mean_log_return"].get<double>() - 0.0372698389918167) <= 1e-12);
    CHECK(j["ranking_reversal"] == false);

    const auto losing = d.write("l.csv", "a\n0.5\n-0.4\n");
    CHECK(run({"portfolio", losing}).code == 1);

    const auto broken = d.write("b.csv", "a,b\n0.1,0.2\n0.3,x\n");
    r = run({"portfolio", broken});
    CHECK(r.code == 2);
    CHECK(r.err.find("row 3, column 2") != std::string::npos);

    r = run({"--format", "csv", "portfolio", good});
    CHECK(r.out.rfind("strategy,arithmetic_mean", 0) == 0);
}

TEST_CASE("laws") {
    auto r = run({"laws", "--utility", "log1p", "--trials", "300"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["seed"] == 42);
    CHECK(j["well_behaved"]["all_closed"] == true);
    r = run({"laws", "--utility", "exp:1", "--trials", "300"});
    CHECK(r.code == 0);
    CHECK(run({"laws", "--utility", "bogus"}).code == 2);
}

TEST_CASE("config precedence and validation") {
    TempDir d;
    const auto a = d.write("a.json", R"({"states":["s"],"rewards":[0.10]})");
    const auto b = d.write("b.json", R"({"states":["s"],"rewards":[0.20]})");
    const auto cfg = d.write("c.json", R"({"utility":"identity","seed":9,"tolerances":{"laws":1e-8}})");

    auto r = run({"--config", cfg, "combine", a, b});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["utility"] == "identity");
    CHECK(json::parse(r.out)["combined"][0].get<double>() == doctest::Approx(0.3));

    r = run({"--config", cfg, "--utility", "log1p", "combine", a, b});
    CHECK(json::parse(r.out)["utility"] == "log1p");

    r = run({"--config", cfg, "laws", "--trials", "50"});
    CHECK(json::parse(r.out)["seed"] == 9);
    CHECK(json::parse(r.out)["tolerance"].get<double>() == 1e-8);

    ::setenv("GAMBLE_CALC_CONFIG", cfg.c_str(), 1);
    r = run({"combine", a, b});
    ::unsetenv("GAMBLE_CALC_CONFIG");
    CHECK(json::parse(r.out)["utility"] == "identity");

    CHECK(run({"--config", d.write("u.json", R"({"colour":"red"})"), "combine", a, b}).code == 2);
    CHECK(run({"--config", d.write("t.json", R"({"tolerances":{"fuzz":1}})"), "combine", a, b}).code == 2);
    CHECK(run({"--config", d.write("w.json", R"({"seed":"nine"})"), "combine", a, b}).code == 2);
    CHECK(run({"--config", d.write("n.json", R"({"tolerances":{"laws":-1}})"), "combine", a, b}).code == 2);
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--precision", "3", "laws"}).code == 2);
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate") != std::string::npos);
}

}
