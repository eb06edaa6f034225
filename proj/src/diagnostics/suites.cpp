#include <cstdio>

#include "memstefan/diagnostics/suites.hpp"
#include "memstefan/error.hpp"

namespace memstefan::diag {

namespace {

std::string alpha_label(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

CheckReport failed(std::string name, std::string statement, const std::exception& e) {
    CheckReport r;
    r.name = std::move(name);
    r.statement = std::move(statement);
    r.note = std::string("run failed: ") + e.what();
    return r;
}

void append(std::vector<CheckReport>& out, std::vector<CheckReport> more) {
    for (auto& r : more) {
        out.push_back(std::move(r));
    }
}

} // namespace

solver::SolverConfig StudySetup::default_grid() {
    solver::SolverConfig cfg;
    cfg.dx = 0.04;
    cfg.dt = 0.004;
    cfg.t_end = 1.0;
    cfg.t_seed = 0.02;
    cfg.checkpoints = 0;
    return cfg;
}

std::vector<solver::SolveResult> refinement_runs(const StudySetup& setup, const core::MemoryParams& mem,
                                                 solver::FrontUpdate mode) {
    solver::SolverConfig cfg = setup.base;
    cfg.front_update = mode;
    std::vector<solver::SolveResult> runs;
    for (std::size_t lev = 0; lev < setup.levels; ++lev) {
        runs.push_back(solver::run(setup.phys, mem, cfg));
        cfg.dx /= 2.0;
        cfg.dt /= 2.0;
    }
    return runs;
}

std::vector<CheckReport> crosscheck_suite(const StudySetup& setup, double alpha) {
    const core::MemoryParams mem{alpha, 1.0};
    const std::string tag = "/alpha=" + alpha_label(alpha);
    std::vector<CheckReport> out;
    std::vector<solver::SolveResult> integral;
    std::vector<solver::SolveResult> pointwise;
    try {
        integral = refinement_runs(setup, mem, solver::FrontUpdate::IntegralRelation);
        out.push_back(theorem_crosscheck(integral));
    } catch (const SolverError& e) {
        out.push_back(failed("stefan_on_integral_run" + tag, "integral-relation run", e));
    }
    try {
        pointwise = refinement_runs(setup, mem, solver::FrontUpdate::PointwiseStefan);
        out.push_back(theorem_crosscheck(pointwise));
    } catch (const SolverError& e) {
        out.push_back(failed("relation_on_pointwise_run" + tag, "pointwise Stefan run", e));
    }

    CheckReport gap;
    gap.name = "front_agreement" + tag;
    gap.statement = "integral-relation and pointwise fronts agree within 2 tol(grid)";
    if (integral.size() == setup.levels && pointwise.size() == setup.levels) {
        for (std::size_t lev = 0; lev < setup.levels; ++lev) {
            const Grid g = grid_of(integral[lev]);
            LevelResult lv;
            lv.dx = g.dx;
            lv.dt = g.dt;
            lv.residual = front_gap(integral[lev], pointwise[lev]);
            lv.tolerance = 2.0 * Tolerance{}(g.dx, g.dt);
            gap.levels.push_back(lv);
        }
        finalize(gap);
    } else {
        gap.note = "needs both runs at every level";
    }
    out.push_back(std::move(gap));
    return out;
}

CheckReport equivalence_suite(const StudySetup& setup, double alpha) {
    try {
        const auto runs = refinement_runs(setup, {alpha, 1.0}, solver::FrontUpdate::IntegralRelation);
        return formulation_equivalence_check(runs);
    } catch (const SolverError& e) {
        return failed("formulation_equivalence/alpha=" + alpha_label(alpha), "governing forms agree", e);
    }
}

std::string to_string(Suite suite) {
    switch (suite) {
    case Suite::Operators:
        return "operators";
    case Suite::Lemmas:
        return "lemmas";
    case Suite::Theorems:
        return "theorems";
    case Suite::Limits:
        return "limits";
    case Suite::All:
        return "all";
    }
    return "unknown";
}

Suite parse_suite(const std::string& name) {
    for (Suite s : {Suite::Operators, Suite::Lemmas, Suite::Theorems, Suite::Limits, Suite::All}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw InputError("unknown suite '" + name + "' (expected operators, lemmas, theorems, limits or all)", "suite");
}

std::vector<CheckReport> run_suite(Suite suite, const StudySetup& setup) {
    std::vector<CheckReport> out;
    const bool all = suite == Suite::All;
    if (all || suite == Suite::Operators) {
        append(out, power_rule_suite());
        append(out, inverse_identity_suite());
        append(out, limit_suite());
    }
    if (all || suite == Suite::Lemmas) {
        append(out, jumping_suite());
    }
    if (all || suite == Suite::Theorems) {
        for (auto mode : {solver::FrontUpdate::IntegralRelation, solver::FrontUpdate::PointwiseStefan}) {
            try {
                append(out, classical_oracle_check(setup.phys, setup.base, setup.levels, mode));
            } catch (const SolverError& e) {
                out.push_back(failed("classical/" + solver::to_string(mode), "classical oracle", e));
            }
        }
        for (double alpha : {0.5, 0.75}) {
            append(out, crosscheck_suite(setup, alpha));
            out.push_back(equivalence_suite(setup, alpha));
        }
        for (double alpha : {0.5, 0.75}) {
            try {
                solver::SolverConfig cfg = setup.base;
                const auto run = solver::run(setup.phys, {alpha, 1.0}, cfg);
                out.push_back(null_flux_check(run));
            } catch (const SolverError& e) {
                out.push_back(failed("null_flux/alpha=" + alpha_label(alpha), "null flux", e));
            }
        }
    }
    if (all || suite == Suite::Limits) {
        const double alphas[] = {0.7, 0.9, 0.99};
        out.push_back(alpha_limit_study(setup.phys, setup.base, alphas));
    }
    return out;
}

} // namespace memstefan::diag
