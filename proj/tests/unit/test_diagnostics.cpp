#include <cmath>

#include <gtest/gtest.h>

#include "memstefan/core/residuals.hpp"
#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/diagnostics/report.hpp"
#include "memstefan/diagnostics/suites.hpp"
#include "memstefan/error.hpp"

using namespace memstefan;
using namespace memstefan::diag;

TEST(ObservedOrder, RecoversGeometricRates) {
    const double first[] = {1.0, 0.5, 0.25, 0.125};
    const double second[] = {1.0, 0.25, 0.0625};
    EXPECT_NEAR(*observed_order(first), 1.0, 1e-12);
    EXPECT_NEAR(*observed_order(second), 2.0, 1e-12);
    const double one[] = {1.0};
    const double zero[] = {1.0, 0.0};
    EXPECT_FALSE(observed_order(one));
    EXPECT_FALSE(observed_order(zero));
}

TEST(Finalize, EveryLevelMustPass) {
    CheckReport r;
    r.levels = {{0.1, 0.1, 0.01, 0.02, false, {}}, {0.05, 0.05, 0.03, 0.02, false, {}}};
    finalize(r);
    EXPECT_TRUE(r.levels[0].passed);
    EXPECT_FALSE(r.levels[1].passed);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(summary_line(r).rfind("FAIL", 0), 0u);
    CheckReport empty;
    finalize(empty);
    EXPECT_FALSE(empty.passed);
}

TEST(Tolerance, LinearInGrid) {
    const Tolerance tol;
    EXPECT_DOUBLE_EQ(tol(0.02, 0.01), kToleranceConstant * 0.03);
}

// Gamma ratios from mpmath: Gamma(1.5)/Gamma(2), Gamma(3)/Gamma(2.5).
TEST(PowerRule, ClosedForms) {
    EXPECT_NEAR(power_rule(frac::Operator::RlIntegral, 0.5, 0.5, 1.0), 0.886226925452758014, 1e-15);
    EXPECT_NEAR(power_rule(frac::Operator::Caputo, 2.0, 0.5, 1.0), 1.50450555612735010, 1e-14);
    EXPECT_EQ(power_rule(frac::Operator::Caputo, 0.0, 0.5, 1.0), 0.0);
    EXPECT_EQ(power_rule(frac::Operator::RlDerivative, 0.0, 1.0, 1.0), 0.0);
    EXPECT_NEAR(power_rule(frac::Operator::RlDerivative, 0.0, 0.5, 4.0), 0.5 / std::tgamma(0.5), 1e-15);
}

TEST(Jumping, FrontsInvertTheirPositions) {
    for (const auto& f : {AnalyticFront::linear(0.7), AnalyticFront::square_root(1.3)}) {
        for (double t : {0.1, 0.5, 2.0}) {
            EXPECT_NEAR(f.melt_time(f.position(t)), t, 1e-14);
        }
        const double x = 0.4;
        const double eps = 1e-6;
        EXPECT_NEAR(f.melt_slope(x), (f.melt_time(x + eps) - f.melt_time(x - eps)) / (2 * eps), 1e-8);
    }
    EXPECT_THROW(AnalyticFront::linear(0.0), InputError);
}

TEST(Jumping, PowerFamilyDerivative) {
    const PowerFamily w{{{2.0, 0}, {-1.0, 1}, {0.5, 3}}};
    EXPECT_DOUBLE_EQ(w.value(2.0), 2.0 - 2.0 + 4.0);
    EXPECT_DOUBLE_EQ(w.slope(2.0), -1.0 + 6.0);
}

TEST(Jumping, BothFormulasConvergeOnBothFronts) {
    for (const auto& r : jumping_suite()) {
        EXPECT_TRUE(r.passed) << summary_line(r);
        ASSERT_TRUE(r.order.has_value());
        EXPECT_GT(*r.order, 1.0) << r.name;
    }
}

// A family with w(x, h) = 0 has no boundary term: the check still passes,
// so the formulas are not satisfied by accident of normalisation.
TEST(Jumping, VanishingBoundaryValue) {
    JumpingSetup setup;
    setup.grids = halving({0.02, 0.01}, 2);
    const PowerFamily w{{{1.0, 1}, {1.0, 2}}};
    EXPECT_TRUE(jumping_formula_check_1(w, AnalyticFront::linear(1.0), setup).passed);
    EXPECT_TRUE(jumping_formula_check_2(w, AnalyticFront::square_root(1.0), setup).passed);
}

TEST(Jumping, RejectsClassicalOrder) {
    JumpingSetup setup;
    setup.alpha = 1.0;
    setup.grids = halving({0.02, 0.01}, 1);
    EXPECT_THROW(jumping_formula_check_1(PowerFamily::quadratic(), AnalyticFront::linear(1.0), setup), InputError);
}

TEST(OperatorSuites, AllPass) {
    for (const auto& r : power_rule_suite()) {
        EXPECT_TRUE(r.passed) << summary_line(r);
    }
    for (const auto& r : inverse_identity_suite()) {
        EXPECT_TRUE(r.passed) << summary_line(r);
    }
    for (const auto& r : limit_suite()) {
        EXPECT_TRUE(r.passed) << summary_line(r);
    }
}

// The constant C of tol(grid) keeps a factor of two over every classical
// residual in the window the solver-level checks inspect.
TEST(Tolerance, CalibrationMargin) {
    const StudySetup setup;
    for (auto mode : {solver::FrontUpdate::IntegralRelation, solver::FrontUpdate::PointwiseStefan}) {
        for (const auto& run : refinement_runs(setup, {1.0, 1.0}, mode)) {
            const Grid g = grid_of(run);
            const double half = 0.5 * Tolerance{}(g.dx, g.dt);
            core::ResidualOptions o;
            o.from_time = 2.0 * run.seed_time();
            const auto J = core::memory_flux(run.field, run.front, run.phys, run.mem);
            EXPECT_LE(core::implicit_flux_residual(J, run.field, run.front, run.phys, run.mem, o), half);
            EXPECT_LE(core::continuity_residual(run.field, J, run.front, run.phys, o), half);
            EXPECT_LE(core::governing_residual_caputo(run.field, run.front, run.phys, run.mem, o), half);
            EXPECT_LE(core::governing_residual_rl(run.field, run.front, run.phys, run.mem, o), half);
            EXPECT_LE(core::max_residual(core::stefan_condition_residual(run.field, run.front, run.phys, run.mem, o)),
                      half);
        }
    }
}

// On classical output the two governing forms coincide, so the equivalence
// check passes there.
TEST(SolverChecks, EquivalenceHoldsAtClassicalOrder) {
    const StudySetup setup;
    const auto runs = refinement_runs(setup, {1.0, 1.0}, solver::FrontUpdate::IntegralRelation);
    const auto r = formulation_equivalence_check(runs);
    EXPECT_TRUE(r.passed) << summary_line(r);
}

TEST(SolverChecks, CrosscheckHoldsAtClassicalOrder) {
    const StudySetup setup;
    for (auto mode : {solver::FrontUpdate::IntegralRelation, solver::FrontUpdate::PointwiseStefan}) {
        const auto r = theorem_crosscheck(refinement_runs(setup, {1.0, 1.0}, mode));
        EXPECT_TRUE(r.passed) << summary_line(r);
    }
}

TEST(SolverChecks, ClassicalOracle) {
    const StudySetup setup;
    for (const auto& r : classical_oracle_check(setup.phys, setup.base, 3, solver::FrontUpdate::IntegralRelation)) {
        EXPECT_TRUE(r.passed) << summary_line(r);
    }
}

TEST(SolverChecks, NullFlux) {
    const StudySetup setup;
    const auto run = solver::run(setup.phys, {0.75, 1.0}, setup.base);
    const auto r = null_flux_check(run);
    EXPECT_TRUE(r.passed) << summary_line(r);
    EXPECT_EQ(r.levels[0].details[0].second, 0.0);
    EXPECT_GT(r.levels[0].details[2].second, 0.0);
}

TEST(SolverChecks, FrontGapOfARunWithItselfIsZero) {
    const StudySetup setup;
    const auto run = solver::run(setup.phys, {0.5, 1.0}, setup.base);
    EXPECT_EQ(front_gap(run, run), 0.0);
    auto other = setup.base;
    other.dx /= 2.0;
    const auto finer = solver::run(setup.phys, {0.5, 1.0}, other);
    EXPECT_THROW(front_gap(run, finer), InputError);
}

TEST(SolverChecks, ClassicalRunIsAtZeroDistanceUpToTruncation) {
    const StudySetup setup;
    const auto run = solver::run(setup.phys, {1.0, 1.0}, setup.base);
    EXPECT_LT(distance_to_classical(run), 0.01);
}

TEST(Suites, ParseNames) {
    EXPECT_EQ(parse_suite("lemmas"), Suite::Lemmas);
    EXPECT_EQ(to_string(parse_suite("all")), "all");
    EXPECT_THROW(parse_suite("everything"), InputError);
}
