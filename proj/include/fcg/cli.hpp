#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fcg::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kSolver = 3 };

/// Settings shared by every subcommand. Precedence: command-line flag, then
/// config file (--config or GAMBLE_CALC_CONFIG), then these defaults.
struct CliConfig {
    std::string utility = "log1p";
    /// Keys: separation_margin, witness_tol, sure_loss_eps, lp_feasibility_tol,
    /// laws.
    std::map<std::string, double> tolerances;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
};

/// Unknown keys, unknown tolerance names and wrong value types are errors.
CliConfig load_config(const std::filesystem::path& path);

/// Runs one invocation; args exclude the program name. Structured output goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcg::cli
