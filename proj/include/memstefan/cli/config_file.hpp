#ifndef MEMSTEFAN_CLI_CONFIG_FILE_HPP
#define MEMSTEFAN_CLI_CONFIG_FILE_HPP

#include <filesystem>
#include <string>

#include "memstefan/core/params.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::cli {

/// Everything a solve needs. INI layout:
///
///   [physical]  k rho c l T0 Tm
///   [memory]    alpha mu
///   [grid]      dx dt t_end
///   [solver]    t_seed front_update newton_tol max_newton_iters checkpoints
///
/// Absent keys keep their defaults; unknown sections or keys are errors.
struct RunConfig {
    core::PhysicalParams phys;
    core::MemoryParams mem;
    solver::SolverConfig solver;

    /// Throws InputError naming the first invalid field.
    void validate() const;
};

/// Parses INI text. Throws InputError (field = "section.key") on syntax
/// errors, unknown keys and values that are not numbers. Does not validate.
RunConfig parse_config(const std::string& text);

/// Reads an INI file, or the "config" object of a manifest.json written by
/// `solve`, then validates.
RunConfig load_config(const std::filesystem::path& path);

/// INI text with every value in round-trip exact form; parse_config inverts it.
std::string to_ini(const RunConfig& cfg);

} // namespace memstefan::cli

#endif // MEMSTEFAN_CLI_CONFIG_FILE_HPP
