#ifndef MEMSTEFAN_SOLVER_SOLVER_HPP
#define MEMSTEFAN_SOLVER_SOLVER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "memstefan/core/field.hpp"
#include "memstefan/core/front.hpp"
#include "memstefan/core/params.hpp"

namespace memstefan::solver {

enum class FrontUpdate { IntegralRelation, PointwiseStefan };

std::string to_string(FrontUpdate mode);
/// Accepts "integral" / "integral-relation" and "pointwise" / "pointwise-stefan".
FrontUpdate parse_front_update(const std::string& name);

struct SolverConfig {
    double dx = 0.01;
    double dt = 1e-3;
    double t_end = 1.0;
    double t_seed = 0.01;
    FrontUpdate front_update = FrontUpdate::IntegralRelation;
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    /// Residual checkpoints spread evenly over (t_seed, t_end]; 0 disables
    /// the residual report.
    int checkpoints = 4;

    /// Throws InputError naming the offending field.
    void validate() const;
};

/// Result of one field solve at t_{n+1} for a given front position.
struct StepField {
    double front = 0.0;
    /// Melt times of the nodes the front crosses during the step.
    std::vector<double> new_melt_times;
    /// u at every liquid node of level n+1, node 0 included.
    std::vector<double> values;
};

/// Time-marching state in scaled units (rho = c = k = 1, lengths divided by
/// sqrt(d)). Levels are t_n = n dt starting at t_0 = 0.
///
/// Node i sits at x_i = i dx. values[n] holds u at the nodes liquid at level
/// n (x_i < positions[n]); slopes[n] holds u_x there and front_slopes[n] the
/// liquid-side gradient at the front (NaN without liquid). traces[n] is the
/// Caputo derivative of order 1 - alpha of u at the front and
/// trace_integrals[n] its trapezoid integral from the seed level.
struct SolverState {
    core::PhysicalParams phys;
    core::MemoryParams mem;
    double dx = 0.0;
    double dt = 0.0;
    std::size_t seed_level = 0;
    std::vector<double> positions;
    std::vector<double> melt_times;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> slopes;
    std::vector<double> front_slopes;
    std::vector<double> traces;
    std::vector<double> trace_integrals;

    std::size_t level() const noexcept { return positions.size() - 1; }
    double time(std::size_t n) const noexcept { return static_cast<double>(n) * dt; }
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx; }

    /// Appends a level and derives its slopes and trace.
    void commit(const StepField& step);
};

/// Caputo derivative of order 1 - alpha of u at the front of level n,
/// extrapolated from the last two nodes melted at least one step earlier
/// (u - Tm when alpha = 1).
double front_trace(const SolverState& state, std::size_t n);

/// RL derivative of order 1 - alpha of the u_x history, extrapolated to the
/// front of level n in the same way (u_x when alpha = 1).
double front_memory_flux(const SolverState& state, std::size_t n);

/// int_0^s x u dx through the liquid values and (s, Tm).
double first_moment(const std::vector<double>& values, double dx, double s, double Tm);

struct RunStats {
    std::size_t seed_level = 0;
    double dt = 0.0;
    bool dt_capped = false;
    std::size_t steps = 0;
    int max_coupling_iterations = 0;
    long newton_iterations = 0;
    std::size_t multi_crossing_steps = 0;
    /// Largest max(Tm - u, u - T0, 0) seen, and where.
    double max_principle_violation = 0.0;
    double max_principle_time = 0.0;
    std::vector<std::string> warnings;
};

struct CheckpointResiduals {
    double t = 0.0;
    std::size_t level = 0;
    double implicit_flux = 0.0;
    double continuity = 0.0;
    double governing_caputo = 0.0;
    double governing_rl = 0.0;
    double stefan_condition = 0.0;
    /// Integral relation residual relative to the heat input since t_seed.
    double integral_relation = 0.0;
};

struct SolveResult {
    core::PhysicalParams phys;
    core::MemoryParams mem;
    SolverConfig config;
    /// Dimensional front and field.
    core::FrontHistory front;
    core::TemperatureField field;
    RunStats stats;
    std::vector<CheckpointResiduals> residuals;

    double seed_time() const noexcept { return front.time(stats.seed_level); }
    /// Max-principle violations stay below 1e-8 (T0 - Tm).
    bool max_principle_ok() const noexcept;
};

/// Scaled state holding the exact classical similarity solution on levels
/// 0 .. round(t_seed / dt), for any alpha. `dt` is the step after capping.
/// Throws StepSizeError when s(t_seed) <= dx.
SolverState seed_solution(const core::PhysicalParams& phys, const core::MemoryParams& mem, const SolverConfig& cfg);

/// Step actually used by run(): dt capped so the seed front crosses at most
/// one node per step, then shrunk so t_end is a whole number of steps.
double effective_step(const core::PhysicalParams& phys, const SolverConfig& cfg, bool* capped = nullptr);

/// Melt times h(x_i) = t_n + (x_i - s_n) dt / (s_next - s_n) of the nodes
/// with s_n <= x_i < s_next that are not yet liquid, in x order.
/// Throws MonotonicityError unless s_next > s_n.
std::vector<double> mint_node(const SolverState& state, double s_next);

/// Field at t_{n+1} for front s_next: L1 Caputo sums over each node's
/// history from its melt time, the averaged source on the first steps after
/// melt, and an implicit three-point Laplacian (Shortley-Weller at the
/// front). Throws StabilityError when the tridiagonal solve breaks down.
StepField advance_step(const SolverState& state, double s_next);

/// Front at t_{n+1} and the matching field. Integral-relation mode couples
/// the scalar relation (solved by safeguarded Newton) with the field solve;
/// pointwise mode takes one explicit step of the fractional Stefan condition.
StepField update_front(const SolverState& state, const SolverConfig& cfg, long* newton_iterations = nullptr,
                       int* coupling_iterations = nullptr);

SolveResult run(const core::PhysicalParams& phys, const core::MemoryParams& mem, const SolverConfig& cfg);

} // namespace memstefan::solver

#endif // MEMSTEFAN_SOLVER_SOLVER_HPP
