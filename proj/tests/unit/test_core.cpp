#include <cmath>

#include <gtest/gtest.h>

#include "memstefan/core/field.hpp"
#include "memstefan/core/front.hpp"
#include "memstefan/core/history.hpp"
#include "memstefan/core/neumann.hpp"
#include "memstefan/core/params.hpp"
#include "memstefan/core/residuals.hpp"
#include "memstefan/error.hpp"

using namespace memstefan;
using namespace memstefan::core;

TEST(Params, ValidationNamesTheField) {
    PhysicalParams p;
    p.T0 = p.Tm;
    try {
        p.validate();
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.field(), "T0");
        EXPECT_NE(std::string(e.what()).find("T0 > Tm"), std::string::npos);
    }
    p = PhysicalParams{};
    p.rho = -1.0;
    EXPECT_THROW(p.validate(), InputError);

    MemoryParams m{1.5, 1.0};
    try {
        m.validate();
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.field(), "alpha");
        EXPECT_NE(std::string(e.what()).find("(0,1]"), std::string::npos);
    }
    EXPECT_THROW((MemoryParams{1.0, 2.0}.validate()), InputError);
    EXPECT_NO_THROW((MemoryParams{0.5, 2.0}.validate()));
}

TEST(Params, NondimensionalKeepsStefanNumber) {
    PhysicalParams p{2.0, 3.0, 4.0, 5.0, 10.0, 1.0};
    const auto q = nondimensional(p);
    EXPECT_DOUBLE_EQ(q.k, 1.0);
    EXPECT_DOUBLE_EQ(q.diffusivity(), 1.0);
    EXPECT_DOUBLE_EQ(q.stefan_number(), p.stefan_number());
}

// Reference roots of sqrt(pi) x exp(x^2) erf(x) = Ste from a 30-digit
// mpmath findroot.
TEST(Neumann, LambdaMatchesHighPrecisionRoot) {
    EXPECT_NEAR(neumann_lambda(1.0), 0.620062633313595495, 1e-15);
    EXPECT_NEAR(neumann_lambda(0.1), 0.220016272742937856, 1e-15);
    EXPECT_THROW(neumann_lambda(0.0), InputError);
}

TEST(Neumann, FrontAndFieldAreConsistent) {
    PhysicalParams p{2.0, 1.0, 0.5, 3.0, 4.0, 1.0};
    const NeumannSolution n(p);
    const double t = 0.7;
    const double s = n.front(t);
    EXPECT_NEAR(n.melt_time(s), t, 1e-14);
    EXPECT_NEAR(n.temperature(s, t), p.Tm, 1e-13);
    EXPECT_DOUBLE_EQ(n.temperature(0.0, t), p.T0);
    // Stefan condition rho l s' = -k u_x at the front.
    EXPECT_NEAR(p.rho * p.l * n.velocity(t), -p.k * n.gradient(s, t), 1e-12);
}

TEST(FrontHistory, LinearFrontInverse) {
    std::vector<double> s;
    for (int k = 0; k <= 20; ++k) {
        s.push_back(0.5 * 0.05 * k);
    }
    const auto f = FrontHistory::from_positions(0.0, 0.05, s, 0.1);
    ASSERT_EQ(f.nodes_reached(), 5u);
    for (std::size_t i = 0; i < f.nodes_reached(); ++i) {
        EXPECT_NEAR(f.node_melt_time(i), 2.0 * f.node(i), 1e-14);
    }
    EXPECT_NEAR(f.velocity(0), 0.5, 1e-14);
    EXPECT_NEAR(f.velocity(10), 0.5, 1e-14);
    EXPECT_TRUE(f.strictly_increasing());
    EXPECT_EQ(f.liquid_count(4), 1u);
    EXPECT_THROW(f.melt_time(1.5), DomainError);
}

TEST(FrontHistory, RejectsRecedingFront) {
    EXPECT_THROW(FrontHistory::from_positions(0.0, 0.1, {0.0, 0.2, 0.1}, 0.05), InputError);
}

TEST(NodeHistory, ResampleCountsIntervals) {
    const NodeHistory h({0.0, 0.25, 1.0}, {0.0, 1.0, 4.0});
    EXPECT_EQ(h.resample(0.1).last(), 10u);
    EXPECT_EQ(h.resample(0.5).last(), 3u);
    EXPECT_DOUBLE_EQ(h(0.625), 2.5);
}

TEST(Stencils, ExactOnQuadratics) {
    const double x[3] = {0.0, 0.3, 0.5};
    double f[3];
    for (int j = 0; j < 3; ++j) {
        f[j] = 2.0 * x[j] * x[j] - x[j] + 1.0;
    }
    EXPECT_NEAR(lagrange_slope(x, f, 0.4), 0.6, 1e-13);
    EXPECT_NEAR(lagrange_curvature(x, f), 4.0, 1e-12);
}

namespace {

NeumannSample neumann(double dx, double dt) {
    const NeumannSolution n(PhysicalParams{});
    return n.sample(dx, dt, static_cast<std::size_t>(std::llround(1.0 / dt)) + 1);
}

} // namespace

TEST(MemoryFlux, SolidNodesHoldExactZero) {
    const auto s = neumann(0.05, 0.01);
    const auto J = memory_flux(s.field, s.front, PhysicalParams{}, MemoryParams{0.5, 1.0});
    for (std::size_t k = 0; k < J.levels(); ++k) {
        for (std::size_t i = s.front.liquid_count(k); i < J.nodes(); ++i) {
            EXPECT_EQ(J(i, k), 0.0);
        }
    }
}

TEST(MemoryFlux, ClassicalOrderIsFourierLaw) {
    const auto s = neumann(0.05, 0.01);
    const auto J = memory_flux(s.field, s.front, PhysicalParams{}, MemoryParams{});
    const GradientField g(s.field, s.front, 0.0);
    const std::size_t k = J.levels() - 1;
    for (std::size_t i = 1; i < s.front.liquid_count(k); ++i) {
        EXPECT_DOUBLE_EQ(J(i, k), -g(i, k));
    }
}

// Residual functionals evaluated on the exact classical solution shrink
// under refinement.
TEST(Residuals, ClassicalSolutionConverges) {
    const PhysicalParams p;
    const MemoryParams m;
    double prev_stefan = INFINITY;
    double prev_rel = INFINITY;
    double prev_cont = INFINITY;
    for (double dx : {0.04, 0.02, 0.01}) {
        const auto s = neumann(dx, dx / 10.0);
        ResidualOptions opts;
        opts.from_time = 0.1;
        const double stefan = max_residual(stefan_condition_residual(s.field, s.front, p, m, opts));
        const double rel = std::abs(integral_relation(s.field, s.front, p, m, 1.0, 0.1).relative());
        const auto J = memory_flux(s.field, s.front, p, m);
        const double cont = continuity_residual(s.field, J, s.front, p, opts);
        EXPECT_LT(stefan, prev_stefan);
        EXPECT_LT(rel, prev_rel);
        EXPECT_LT(cont, prev_cont);
        prev_stefan = stefan;
        prev_rel = rel;
        prev_cont = cont;
    }
    EXPECT_LT(prev_stefan, 0.01);
    EXPECT_LT(prev_rel, 0.01);
}

// A front that stops abruptly has a negative one-sided velocity estimate at
// the last level.
TEST(Residuals, NegativeVelocityIsRejected) {
    const auto f = FrontHistory::from_positions(0.0, 0.1, {0.0, 0.2, 0.4, 0.8, 1.0, 1.0}, 0.1);
    ASSERT_LT(f.velocity(5), 0.0);
    const auto u = TemperatureField::sample(f, 0.0, [](double x, double) { return 1.0 - x; });
    EXPECT_THROW(stefan_condition_residual(u, f, PhysicalParams{}, MemoryParams{}), MonotonicityError);
}

TEST(FieldMonitor, ReportsSolidViolations) {
    const auto s = neumann(0.1, 0.05);
    const auto m = monitor_field(s.field, s.front, PhysicalParams{});
    EXPECT_EQ(m.solid_violation, 0.0);
    EXPECT_EQ(m.boundary_violation, 0.0);
}
