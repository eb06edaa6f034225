#ifndef MEMSTEFAN_CLI_COMMANDS_HPP
#define MEMSTEFAN_CLI_COMMANDS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "memstefan/solver/solver.hpp"

namespace memstefan::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kRuntimeError = 2,
    kVerificationFailure = 3,
};

/// Runs the solver and writes front.csv, profiles.csv, flux.csv,
/// residuals.json, manifest.json (all deterministic) and run.log
/// (timestamped) into `out`.
int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out,
              std::optional<solver::FrontUpdate> front_update, std::ostream& log);

/// Runs a diagnostics suite, prints the summary table and writes
/// verify.json. Exit 0 iff every check passes.
int cmd_verify(const std::string& suite, const std::filesystem::path& out, std::ostream& log);

/// Repeats the run `levels` times halving dx and dt; prints errors against
/// the finest level with observed orders, and writes converge.json when
/// `out` is not empty.
int cmd_converge(const std::filesystem::path& config, std::size_t levels, const std::filesystem::path& out,
                 std::optional<solver::FrontUpdate> front_update, std::ostream& log);

} // namespace memstefan::cli

#endif // MEMSTEFAN_CLI_COMMANDS_HPP
