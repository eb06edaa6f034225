#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "memstefan/core/neumann.hpp"
#include "memstefan/error.hpp"
#include "memstefan/solver/solver.hpp"

using namespace memstefan;
using solver::SolverConfig;

namespace {

SolverConfig small_grid() {
    SolverConfig c;
    c.dx = 0.04;
    c.dt = 0.004;
    c.t_seed = 0.02;
    c.t_end = 0.2;
    c.checkpoints = 0;
    return c;
}

// Level N of the scheme rebuilt from its definition and solved as a dense
// system: for each liquid node i >= 1,
//   sum over history segments of slope * [(t-a)^(1-alpha) - (t-b)^(1-alpha)] / Gamma(2-alpha)
//   + cell-averaged source = mu * (three-point or Shortley-Weller Laplacian),
// with u(0) = T0 and u(s_next) = Tm.
std::vector<double> dense_oracle(const solver::SolverState& st, double s_next) {
    const std::size_t n = st.level();
    const std::size_t N = n + 1;
    const double t = st.time(N);
    const double dt = st.dt;
    const double dx = st.dx;
    const double a = st.mem.alpha;
    const double mu = st.mem.mu;
    const double T0 = st.phys.T0;
    const double Tm = st.phys.Tm;
    const double l = st.phys.l;

    std::vector<double> melt = st.melt_times;
    const double s_n = st.positions[n];
    for (std::size_t i = melt.size(); st.x(i) < s_next; ++i) {
        melt.push_back(st.time(n) + (st.x(i) - s_n) * dt / (s_next - s_n));
    }
    const std::size_t m = melt.size();
    const std::size_t k = m - 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 1; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(i - 1);
        const double h = melt[i];
        std::vector<double> times{h};
        std::vector<double> vals{Tm};
        for (std::size_t j = 0; j < N; ++j) {
            if (st.time(j) > h + 1e-9 * dt && i < st.values[j].size()) {
                times.push_back(st.time(j));
                vals.push_back(st.values[j][i]);
            }
        }
        // Caputo part: coefficient of u_i^N plus known remainder.
        double coef = 0.0;
        double known = 0.0;
        if (a == 1.0) {
            coef = 1.0 / (t - times.back());
            known = -vals.back() * coef;
        } else {
            auto w = [&](double lo, double hi) {
                return (std::pow(t - lo, 1.0 - a) - std::pow(t - hi, 1.0 - a)) / std::tgamma(2.0 - a);
            };
            for (std::size_t q = 0; q + 1 < times.size(); ++q) {
                known += (vals[q + 1] - vals[q]) / (times[q + 1] - times[q]) * w(times[q], times[q + 1]);
            }
            const double last = times.back();
            coef = w(last, t) / (t - last);
            known -= coef * vals.back();
            const double lo = std::max(t - dt - h, 0.0);
            if (t - dt - h < dt) {
                known += l * (std::pow(t - h, 1.0 - a) - std::pow(lo, 1.0 - a)) / (std::tgamma(2.0 - a) * dt);
            } else {
                known += l * std::pow(t - h, -a) / std::tgamma(1.0 - a);
            }
        }
        A(r, r) += coef;
        b(r) -= known;
        const double x = st.x(i);
        double cl;
        double cc;
        double cr;
        double right_value = 0.0;
        bool right_known = false;
        if (i + 1 < m) {
            cl = cr = mu / (dx * dx);
            cc = -2.0 * mu / (dx * dx);
        } else {
            const double eta = s_next - x;
            cl = 2.0 * mu / (dx * (dx + eta));
            cr = 2.0 * mu / (eta * (dx + eta));
            cc = -cl - cr;
            right_value = Tm;
            right_known = true;
        }
        A(r, r) -= cc;
        if (i == 1) {
            b(r) += cl * T0;
        } else {
            A(r, r - 1) -= cl;
        }
        if (right_known) {
            b(r) += cr * right_value;
        } else {
            A(r, r + 1) -= cr;
        }
    }
    const Eigen::VectorXd u = A.fullPivLu().solve(b);
    std::vector<double> out{T0};
    for (Eigen::Index r = 0; r < u.size(); ++r) {
        out.push_back(u(r));
    }
    return out;
}

} // namespace

TEST(SolverConfig, Validation) {
    SolverConfig c = small_grid();
    EXPECT_NO_THROW(c.validate());
    c.dx = 0.0;
    EXPECT_THROW(c.validate(), InputError);
    c = small_grid();
    c.t_seed = 2.0 * c.t_end;
    EXPECT_THROW(c.validate(), InputError);
    c = small_grid();
    c.max_newton_iters = 0;
    EXPECT_THROW(c.validate(), InputError);
    EXPECT_EQ(solver::parse_front_update("pointwise"), solver::FrontUpdate::PointwiseStefan);
    EXPECT_EQ(solver::parse_front_update("integral-relation"), solver::FrontUpdate::IntegralRelation);
    EXPECT_THROW(solver::parse_front_update("euler"), InputError);
}

TEST(Seed, MatchesSimilaritySolution) {
    const core::PhysicalParams p;
    const auto st = solver::seed_solution(p, {0.5, 1.0}, small_grid());
    const core::NeumannSolution exact(p);
    ASSERT_EQ(st.seed_level, 5u);
    for (std::size_t k = 1; k <= st.seed_level; ++k) {
        EXPECT_NEAR(st.positions[k], exact.front(st.time(k)), 1e-14);
        for (std::size_t i = 0; i < st.values[k].size(); ++i) {
            EXPECT_NEAR(st.values[k][i], exact.temperature(st.x(i), st.time(k)), 1e-14);
        }
    }
}

TEST(Seed, RunEndingAtSeedReturnsSeed) {
    SolverConfig c = small_grid();
    c.t_end = c.t_seed;
    const auto r = solver::run(core::PhysicalParams{}, core::MemoryParams{}, c);
    EXPECT_EQ(r.front.levels(), 6u);
    EXPECT_EQ(r.stats.steps, 0u);
}

TEST(Seed, TooCoarseGridIsRejected) {
    SolverConfig c = small_grid();
    c.dx = 0.5;
    EXPECT_THROW(solver::run(core::PhysicalParams{}, core::MemoryParams{}, c), StepSizeError);
}

class AdvanceStep : public ::testing::TestWithParam<core::MemoryParams> {};

TEST_P(AdvanceStep, MatchesDenseOracle) {
    const core::PhysicalParams p;
    const SolverConfig cfg = small_grid();
    auto st = solver::seed_solution(p, GetParam(), cfg);
    for (int step = 0; step < 6; ++step) {
        const double prev = st.positions[st.level() - 1];
        const double s = st.positions.back();
        // Crosses a node on some steps, not on others.
        for (double factor : {0.3, 1.0, 2.5}) {
            const double s_next = s + factor * (s - prev);
            const auto got = solver::advance_step(st, s_next);
            const auto want = dense_oracle(st, s_next);
            ASSERT_EQ(got.values.size(), want.size());
            for (std::size_t i = 0; i < want.size(); ++i) {
                EXPECT_NEAR(got.values[i], want[i], 1e-12) << "node " << i << " step " << step;
            }
        }
        st.commit(solver::update_front(st, cfg));
    }
}

INSTANTIATE_TEST_SUITE_P(Orders, AdvanceStep,
                         ::testing::Values(core::MemoryParams{1.0, 1.0}, core::MemoryParams{0.5, 1.0},
                                           core::MemoryParams{0.75, 1.3}));

TEST(Mint, MeltTimesInterpolateTheFront) {
    const auto st = solver::seed_solution(core::PhysicalParams{}, core::MemoryParams{}, small_grid());
    const double s = st.positions.back();
    const auto h = solver::mint_node(st, s + 0.05);
    ASSERT_FALSE(h.empty());
    EXPECT_GT(h.front(), st.time(st.level()));
    EXPECT_LT(h.back(), st.time(st.level() + 1));
    EXPECT_THROW(solver::mint_node(st, s), MonotonicityError);
}

TEST(Run, ClassicalFrontTracksSimilaritySolution) {
    const core::PhysicalParams p;
    const core::NeumannSolution exact(p);
    SolverConfig c = small_grid();
    c.t_end = 1.0;
    double previous = INFINITY;
    for (int level = 0; level < 3; ++level) {
        const auto r = solver::run(p, core::MemoryParams{}, c);
        double err = 0.0;
        for (std::size_t k = 0; k < r.front.levels(); ++k) {
            const double t = r.front.time(k);
            if (t >= 2.0 * c.t_seed) {
                err = std::max(err, std::abs(r.front.position(k) - exact.front(t)) / r.front.position(k));
            }
        }
        EXPECT_LT(err, previous);
        EXPECT_TRUE(r.front.strictly_increasing());
        EXPECT_TRUE(r.max_principle_ok());
        previous = err;
        c.dx /= 2.0;
        c.dt /= 2.0;
    }
    EXPECT_LT(previous, 0.02);
}

TEST(Run, ModesAgreeAtClassicalOrder) {
    const core::PhysicalParams p;
    SolverConfig c = small_grid();
    const auto a = solver::run(p, core::MemoryParams{}, c);
    c.front_update = solver::FrontUpdate::PointwiseStefan;
    const auto b = solver::run(p, core::MemoryParams{}, c);
    ASSERT_EQ(a.front.levels(), b.front.levels());
    for (std::size_t k = 0; k < a.front.levels(); ++k) {
        EXPECT_NEAR(a.front.position(k), b.front.position(k), 0.01);
    }
}

TEST(Run, Deterministic) {
    const SolverConfig c = small_grid();
    const auto a = solver::run(core::PhysicalParams{}, core::MemoryParams{0.5, 1.0}, c);
    const auto b = solver::run(core::PhysicalParams{}, core::MemoryParams{0.5, 1.0}, c);
    EXPECT_TRUE(std::equal(a.front.positions().begin(), a.front.positions().end(), b.front.positions().begin()));
    EXPECT_TRUE(std::equal(a.field.values().begin(), a.field.values().end(), b.field.values().begin()));
}

TEST(Run, DimensionalUnitsScaleLengths) {
    core::PhysicalParams p;
    p.k = 4.0; // d = 4: lengths double
    SolverConfig c = small_grid();
    const auto scaled = solver::run(core::PhysicalParams{}, core::MemoryParams{}, c);
    c.dx *= 2.0;
    const auto dim = solver::run(p, core::MemoryParams{}, c);
    EXPECT_NEAR(dim.front.reach(), 2.0 * scaled.front.reach(), 1e-12);
}

TEST(EffectiveStep, CapsLargeSteps) {
    SolverConfig c = small_grid();
    c.dt = 0.02;
    bool capped = false;
    const double dt = solver::effective_step(core::PhysicalParams{}, c, &capped);
    EXPECT_TRUE(capped);
    EXPECT_LT(dt, c.dt);
    const double steps = c.t_end / dt;
    EXPECT_NEAR(steps, std::round(steps), 1e-9);
}
