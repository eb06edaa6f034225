#ifndef MEMSTEFAN_CLI_OUTPUT_HPP
#define MEMSTEFAN_CLI_OUTPUT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "memstefan/cli/config_file.hpp"
#include "memstefan/diagnostics/report.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::cli {

/// Shortest decimal that parses back to the same double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double v);

/// Levels written to profiles.csv and flux.csv: the residual checkpoints, or
/// the last level when there are none.
std::vector<std::size_t> profile_levels(const solver::SolveResult& run);

/// front.csv columns: t,s,ds_dt (one row per level).
std::string front_csv(const solver::SolveResult& run);
/// profiles.csv columns: t,x,u (liquid nodes, then the front point (s, Tm)).
std::string profiles_csv(const solver::SolveResult& run);
/// flux.csv columns: t,x,J (liquid nodes whose flux is defined).
std::string flux_csv(const solver::SolveResult& run);

/// Checkpoint residuals, the Stefan and integral relation series summaries
/// and run statistics.
nlohmann::ordered_json residuals_json(const solver::SolveResult& run);

nlohmann::ordered_json config_json(const RunConfig& cfg);

nlohmann::ordered_json report_json(const diag::CheckReport& report);
nlohmann::ordered_json reports_json(std::span<const diag::CheckReport> reports);

/// Fixed-width PASS/FAIL table, one row per report.
std::string summary_table(std::span<const diag::CheckReport> reports);

/// CRC-32 of a byte string.
std::uint32_t crc32(const std::string& bytes);

/// Writes `text` to `path`; throws memstefan::Error when the file cannot be
/// written.
void write_file(const std::filesystem::path& path, const std::string& text);

} // namespace memstefan::cli

#endif // MEMSTEFAN_CLI_OUTPUT_HPP
