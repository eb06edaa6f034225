#ifndef MEMSTEFAN_CORE_RESIDUALS_HPP
#define MEMSTEFAN_CORE_RESIDUALS_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "memstefan/core/field.hpp"
#include "memstefan/core/front.hpp"
#include "memstefan/core/params.hpp"

namespace memstefan::core {

/// Which levels a residual functional inspects.
struct ResidualOptions {
    /// Explicit level indices; empty means every level.
    std::vector<std::size_t> levels;
    /// Levels earlier than this are ignored.
    double from_time = -std::numeric_limits<double>::infinity();
};

/// J = -k mu D^{1-alpha}_{h(x)} u_x at every liquid node and level, with the
/// RL derivative taken over the node's own history from its melt time.
/// alpha = 1 gives J = -k u_x. Solid nodes get exactly 0; liquid nodes whose
/// history has a single sample are flagged as skipped.
FluxField memory_flux(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                      const MemoryParams& mem);

/// max |(1/mu) I^{1-alpha}_{h(x)} J + k u_x| / max |k u_x| over mature liquid
/// nodes (melted at least one step before the level).
double implicit_flux_residual(const FluxField& J, const TemperatureField& u, const FrontHistory& front,
                              const PhysicalParams& phys, const MemoryParams& mem, const ResidualOptions& opts = {});

/// max |rho c u_t + J_x| over mature interior liquid nodes, divided by the
/// larger of max |rho c u_t| and max |J_x|.
double continuity_residual(const TemperatureField& u, const FluxField& J, const FrontHistory& front,
                           const PhysicalParams& phys, const ResidualOptions& opts = {});

/// max |C D^alpha u + (l/c)(t-h)^{-alpha}/Gamma(1-alpha) - mu d u_xx| over
/// interior liquid nodes at least two steps past their melt time, divided by
/// the largest of the three terms.
double governing_residual_caputo(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                                 const MemoryParams& mem, const ResidualOptions& opts = {});

/// max |u_t - mu d d/dx[RL D^{1-alpha}_{h(x)} u_x]| over mature interior
/// liquid nodes whose right neighbour is mature, divided by the larger term.
double governing_residual_rl(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                             const MemoryParams& mem, const ResidualOptions& opts = {});

struct StefanSample {
    double t;
    double velocity;
    /// RL D^{1-alpha} u_x extrapolated from the last two mature nodes to s.
    double front_trace;
    /// |rho l s' + mu k front_trace| / (rho l s'); absolute when s' = 0.
    double residual;
};

/// One sample per inspected level with at least one mature liquid node.
/// Throws MonotonicityError when s' < 0 at an inspected level.
std::vector<StefanSample> stefan_condition_residual(const TemperatureField& u, const FrontHistory& front,
                                                    const PhysicalParams& phys, const MemoryParams& mem,
                                                    const ResidualOptions& opts = {});

double max_residual(const std::vector<StefanSample>& series) noexcept;

/// Terms of the integral relation between t_ref and t:
///   (l/c - Tm)(s^2 - s_ref^2)
///     = 2 mu d (T0 - Tm)(t^alpha - t_ref^alpha) / Gamma(alpha + 1)
///       - 2 [int_0^s x u dx]_{t_ref}^{t}
///       - 2 mu d int_{t_ref}^{t} (C D^{1-alpha}_{h(x)} u)(s(tau), tau) dtau.
/// Times are measured from the front's t0. With t_ref = t0 this is the
/// relation from the start; a later t_ref compares two states of one run.
struct IntegralRelationTerms {
    double t = 0.0;
    double t_ref = 0.0;
    double latent = 0.0;
    double heat_input = 0.0;
    double stored = 0.0;
    double trace = 0.0;

    /// latent - (heat_input - stored - trace).
    double residual() const noexcept { return latent - heat_input + stored + trace; }
    /// residual / heat_input (0 when no heat has entered).
    double relative() const noexcept { return heat_input != 0.0 ? residual() / heat_input : 0.0; }
};

/// Terms at every level from the level of t_ref to the last level.
std::vector<IntegralRelationTerms> integral_relation_series(const TemperatureField& u, const FrontHistory& front,
                                                            const PhysicalParams& phys, const MemoryParams& mem,
                                                            double t_ref);

IntegralRelationTerms integral_relation(const TemperatureField& u, const FrontHistory& front,
                                        const PhysicalParams& phys, const MemoryParams& mem, double t, double t_ref);

/// integral_relation(...).residual() with t_ref = t0.
double integral_relation_residual(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                                  const MemoryParams& mem, double t);

/// int_0^{s(t_k)} x u dx by the trapezoid rule through the liquid nodes and (s, Tm).
double first_moment(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t k);

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_RESIDUALS_HPP
