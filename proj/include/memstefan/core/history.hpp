#ifndef MEMSTEFAN_CORE_HISTORY_HPP
#define MEMSTEFAN_CORE_HISTORY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "memstefan/core/field.hpp"
#include "memstefan/core/front.hpp"
#include "memstefan/fraccalc.hpp"

namespace memstefan::core {

/// Piecewise-linear time history of one node, starting at its melt time.
class NodeHistory {
public:
    NodeHistory(std::vector<double> times, std::vector<double> values);

    std::size_t size() const noexcept { return times_.size(); }
    double start() const noexcept { return times_.front(); }
    double end() const noexcept { return times_.back(); }
    double operator()(double t) const;

    /// Linear interpolant sampled on [start, end] with
    /// max(3, ceil((end - start) / step)) equal intervals.
    frac::SampledFunction resample(double step) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Derivative at z of the quadratic through three points.
double lagrange_slope(const double (&x)[3], const double (&f)[3], double z) noexcept;
/// Second derivative of the quadratic through three points.
double lagrange_curvature(const double (&x)[3], const double (&f)[3]) noexcept;

/// u_x of one level: `u` holds the m >= 1 liquid values, `slopes` receives m
/// node slopes, and the front slope is returned. Stencils use the points
/// (x_i, u_i) and (s, Tm): three-point (central or nonuniform) at nodes,
/// one-sided quadratic at the front. A last node closer than dx/4 to the
/// front is left out of the front stencil and of its own.
double level_slopes(std::span<const double> u, double dx, double s, double Tm, std::span<double> slopes);

/// u_x at liquid nodes and at the front (liquid side), per level, from
/// level_slopes.
class GradientField {
public:
    GradientField(const TemperatureField& u, const FrontHistory& front, double Tm);

    double operator()(std::size_t i, std::size_t k) const noexcept { return node_[k * nodes_ + i]; }
    /// Front gradient; NaN at levels without liquid nodes.
    double front(std::size_t k) const noexcept { return front_[k]; }
    /// Front gradient interpolated linearly in time.
    double front_at(double t) const;

private:
    std::size_t nodes_;
    double t0_;
    double dt_;
    std::vector<double> node_;
    std::vector<double> front_;
};

/// u_xx at liquid node i of level k (i >= 1), using (s, Tm) as the right
/// neighbour of the last liquid node.
double curvature(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t i, std::size_t k);

/// Time between the melt of node i and level k.
inline double age(const FrontHistory& front, std::size_t i, std::size_t k) noexcept {
    return front.time(k) - front.node_melt_time(i);
}

/// Node i is liquid at level k and melted at least one step earlier.
inline bool mature(const FrontHistory& front, std::size_t i, std::size_t k) noexcept {
    return front.liquid(i, k) && age(front, i, k) >= front.dt() * (1.0 - 1e-9);
}

/// History of u at node i up to level k: (h_i, u_h) followed by every level
/// later than h_i. u_h is the field value when h_i falls on a level where the
/// node is already liquid (fixed domains), Tm otherwise.
NodeHistory temperature_history(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t i,
                                std::size_t k);

/// History of u_x at node i up to level k; the value at h_i comes from the
/// front gradient (or the field on fixed domains).
NodeHistory gradient_history(const GradientField& grad, const FrontHistory& front, std::size_t i, std::size_t k);

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_HISTORY_HPP
