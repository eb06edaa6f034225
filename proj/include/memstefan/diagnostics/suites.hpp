#ifndef MEMSTEFAN_DIAGNOSTICS_SUITES_HPP
#define MEMSTEFAN_DIAGNOSTICS_SUITES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "memstefan/core/params.hpp"
#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::diag {

/// Problem and coarsest grid of the solver-level studies. Defaults: Ste = 1,
/// dx = 0.04, dt = 0.004, t_seed = 0.02, t_end = 1, three levels.
struct StudySetup {
    core::PhysicalParams phys;
    solver::SolverConfig base = default_grid();
    std::size_t levels = 3;

    static solver::SolverConfig default_grid();
};

/// One run per level, halving dx and dt. Solver errors propagate.
std::vector<solver::SolveResult> refinement_runs(const StudySetup& setup, const core::MemoryParams& mem,
                                                 solver::FrontUpdate mode);

/// Stefan residual on integral runs, integral relation on pointwise runs and
/// front agreement (sup relative gap within 2 tol(grid)) at one alpha. A
/// failed run turns the affected reports into FAIL with the error as note.
std::vector<CheckReport> crosscheck_suite(const StudySetup& setup, double alpha);

/// formulation_equivalence_check on integral-relation runs at one alpha.
CheckReport equivalence_suite(const StudySetup& setup, double alpha);

enum class Suite { Operators, Lemmas, Theorems, Limits, All };

std::string to_string(Suite suite);
/// Throws InputError for names other than operators, lemmas, theorems,
/// limits and all.
Suite parse_suite(const std::string& name);

/// operators: power rule, inverse identities, operator limits.
/// lemmas: jumping formulas. theorems: classical oracle, cross-checks and
/// formulation equivalence at alpha = 0.5 and 0.75, null flux.
/// limits: alpha -> 1 study along 0.7, 0.9, 0.99.
std::vector<CheckReport> run_suite(Suite suite, const StudySetup& setup = {});

} // namespace memstefan::diag

#endif // MEMSTEFAN_DIAGNOSTICS_SUITES_HPP
