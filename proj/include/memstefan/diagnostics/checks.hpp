#ifndef MEMSTEFAN_DIAGNOSTICS_CHECKS_HPP
#define MEMSTEFAN_DIAGNOSTICS_CHECKS_HPP

/**
 * @file checks.hpp
 * @brief Numerical witnesses for the operator identities, the jumping
 *        formulas and the solver-level consistency properties. Every check
 *        returns a CheckReport with one LevelResult per refinement level.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "memstefan/core/params.hpp"
#include "memstefan/diagnostics/report.hpp"
#include "memstefan/fraccalc.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::diag {

// ---------------------------------------------------------------- operators

/// Closed form of `op` of order beta applied to (t - a)^p, p >= 0.
double power_rule(frac::Operator op, double p, double beta, double elapsed);

/// Relative error max|op f - exact| / max|exact| over nodes with
/// t - a >= (T - a)/8, for f = (t - a)^p sampled with N intervals on [0, 1].
double power_rule_error(frac::Operator op, double p, double beta, std::size_t intervals);

/// Power rule at each size in `sizes` (doubling). Passes when the error at
/// the largest size is below `bound` and the observed order is >= 1 (errors
/// already below 1e-12 count as converged).
CheckReport power_rule_check(frac::Operator op, double p, double beta, std::span<const std::size_t> sizes,
                             double bound = 1e-3);

/// p in {0, 0.5, 1, 2} x beta in {0.25, 0.5, 0.75, 1} x every operator, at
/// N = 256, 512, 1024.
std::vector<CheckReport> power_rule_suite();

/// Left-inverse and RL-Caputo gap identities on f = 1 + t + t^2 and on a
/// shifted start, for beta in {0.25, 0.5, 0.75}, at N = 256, 512, 1024.
/// Norm: windowed max |residual| / max |f| (same window as the power rule).
/// Passes when the norm at N = 1024 is below `bound` and the order is >= 1.
std::vector<CheckReport> inverse_identity_suite(double bound = 1e-3);

/// Deviation from the integer-order limit along beta -> 0 for the integral
/// (0.5, 0.1, 0.01, 0.001) and beta -> 1 for both derivatives
/// (0.5, 0.9, 0.99, 0.999), on f = t + t^2 / 2 with N = 1024. Passes when the
/// deviations decrease monotonically.
std::vector<CheckReport> limit_suite();

// ---------------------------------------------------------- jumping formulas

/// Front with a closed-form inverse: s = v t (linear) or s = sigma sqrt(t).
class AnalyticFront {
public:
    static AnalyticFront linear(double speed);
    static AnalyticFront square_root(double sigma);

    double position(double t) const noexcept;
    double melt_time(double x) const noexcept;
    /// h'(x).
    double melt_slope(double x) const noexcept;
    const std::string& name() const noexcept { return name_; }

private:
    AnalyticFront(bool linear, double rate, std::string name);

    bool linear_;
    double rate_;
    std::string name_;
};

/// w(x, t) = sum_j c_j (t - h(x))^{p_j}, with integer powers p_j >= 0.
struct PowerFamily {
    struct Term {
        double coefficient;
        int power;
    };
    std::vector<Term> terms;

    /// w as a function of the elapsed time e = t - h(x).
    double value(double elapsed) const noexcept;
    /// dw/de.
    double slope(double elapsed) const noexcept;
    /// Default family 1 + e + e^2.
    static PowerFamily quadratic();
};

struct Grid {
    double dx;
    double dt;
};

/// (dx, dt), (dx/2, dt/2), ... with `levels` entries.
std::vector<Grid> halving(Grid base, std::size_t levels);

struct JumpingSetup {
    double alpha = 0.5;
    /// Evaluation time; nodes x with x + dx <= 3 s(t) / 4 are used.
    double t = 1.0;
    std::vector<Grid> grids;
};

/// I^{1-a}[w_x] - d/dx I^{1-a}[w] = w(x, h) (t - h)^{-a} h'(x) / Gamma(1 - a),
/// with all fractional operators taken from h(x). Left side numerical, right
/// side closed form. Residual: max |left - right| over the nodes divided by
/// the largest term.
CheckReport jumping_formula_check_1(const PowerFamily& w, const AnalyticFront& front, const JumpingSetup& setup,
                                    Tolerance tol = {});

/// d/dx RL D^{1-a}[w] - RL D^{1-a}[w_x] = (1 - a) w(x, h) h'(x) (t - h)^{a-2} / Gamma(a),
/// which is -d/dt of w(x, h) (t - h)^{a-1} h'(x) / Gamma(a).
CheckReport jumping_formula_check_2(const PowerFamily& w, const AnalyticFront& front, const JumpingSetup& setup,
                                    Tolerance tol = {});

/// Both formulas for the quadratic family on the linear (v = 1) and square-root
/// (sigma = 1) fronts, alpha = 0.5, grids (0.02, 0.01) halved twice.
std::vector<CheckReport> jumping_suite(Tolerance tol = {});

// ------------------------------------------------------------- solver level

/// dx and the step actually used by a run.
Grid grid_of(const solver::SolveResult& run) noexcept;

/// Caputo and RL governing residuals on the same output, for each run of a
/// refinement sequence. Passes when both are below tol(grid) on every run and
/// their ratio stays in [1/10, 10]. Residuals are taken on eight levels
/// evenly spread over [2 t_seed, t_end].
CheckReport formulation_equivalence_check(std::span<const solver::SolveResult> runs, Tolerance tol = {});

/// Residual of the front condition a run did not use, one level per run:
/// the fractional Stefan condition (max over t >= 2 t_seed) for
/// integral-relation runs, the integral relation relative to the heat input
/// since t_seed (max over the same window) for pointwise runs. Passes when
/// every level is below tol(grid).
CheckReport theorem_crosscheck(std::span<const solver::SolveResult> runs, Tolerance tol = {});

/// sup |s_a - s_b| / max s_a over common levels with t >= 2 t_seed. Both runs
/// must share dx and dt.
double front_gap(const solver::SolveResult& a, const solver::SolveResult& b);

/// sup |s(t) - 2 lambda sqrt(d t)| over t in [2 t_seed, t_end].
double distance_to_classical(const solver::SolveResult& run);

/// Runs the solver for each alpha (mu = 1) and records the distance of its
/// front from the classical similarity front. Passes when the distance
/// decreases strictly along the list. A failed run ends the study with a
/// note naming it.
CheckReport alpha_limit_study(const core::PhysicalParams& phys, const solver::SolverConfig& cfg,
                              std::span<const double> alphas);

/// Flux on solid nodes and I^{1-a} J from t0 on nodes still solid at the
/// last level (both must be exactly 0). On liquid nodes melted at least
/// (t_end - t0)/8 before the last level, the node's J history (mature levels,
/// extrapolated back to h) is integrated from h by the library quadrature and
/// from t0, extended by zero, by exact piecewise-linear integration; the
/// largest difference over the largest value must be below tol(grid).
CheckReport null_flux_check(const solver::SolveResult& run, Tolerance tol = {});

/// Classical runs (alpha = 1) on the given grids: relative front error
/// against the similarity solution on [2 t_seed, t_end] at the finest grid
/// must be below 2%, and the Stefan and integral relation residuals must
/// converge with order >= 0.5.
std::vector<CheckReport> classical_oracle_check(const core::PhysicalParams& phys, const solver::SolverConfig& base,
                                                std::size_t levels, solver::FrontUpdate mode);

} // namespace memstefan::diag

#endif // MEMSTEFAN_DIAGNOSTICS_CHECKS_HPP
