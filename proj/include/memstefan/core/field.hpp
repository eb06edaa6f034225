#ifndef MEMSTEFAN_CORE_FIELD_HPP
#define MEMSTEFAN_CORE_FIELD_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "memstefan/core/front.hpp"
#include "memstefan/core/params.hpp"

namespace memstefan::core {

/// Values on the nodes x_i = i dx, i < nodes(), at the levels t_k = t0 + k dt,
/// stored level by level.
class GridField {
public:
    GridField(double dx, std::size_t nodes, double t0, double dt, std::size_t levels, std::vector<double> values);

    double dx() const noexcept { return dx_; }
    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t levels() const noexcept { return levels_; }
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }

    double operator()(std::size_t i, std::size_t k) const noexcept { return values_[k * nodes_ + i]; }
    std::span<const double> level(std::size_t k) const noexcept { return {values_.data() + k * nodes_, nodes_}; }
    std::span<const double> values() const noexcept { return values_; }

    /// Grid and front agree on dx, t0, dt and the number of levels, and the
    /// field covers every node the front reaches.
    bool matches(const FrontHistory& front) const noexcept;

private:
    double dx_;
    std::size_t nodes_;
    double t0_;
    double dt_;
    std::size_t levels_;
    std::vector<double> values_;
};

/// u(x_i, t_k); equal to Tm at nodes the front has not reached.
class TemperatureField : public GridField {
public:
    using GridField::GridField;

    /// u(i,k) = f(x_i, t_k) on liquid nodes and Tm elsewhere, over
    /// front.nodes_reached() + 1 nodes.
    template <class F>
    static TemperatureField sample(const FrontHistory& front, double Tm, F&& f) {
        const std::size_t nodes = front.nodes_reached() + 1;
        std::vector<double> v(nodes * front.levels(), Tm);
        for (std::size_t k = 0; k < front.levels(); ++k) {
            const std::size_t m = front.liquid_count(k);
            for (std::size_t i = 0; i < m; ++i) {
                v[k * nodes + i] = f(front.node(i), front.time(k));
            }
        }
        return {front.dx(), nodes, front.t0(), front.dt(), front.levels(), std::move(v)};
    }
};

/// J(x_i, t_k); exactly 0 on solid nodes. Liquid nodes whose history was too
/// short to differentiate hold 0 and are flagged as skipped.
class FluxField : public GridField {
public:
    FluxField(GridField values, std::vector<unsigned char> skipped);

    bool skipped(std::size_t i, std::size_t k) const noexcept { return skipped_[k * nodes() + i] != 0; }
    std::size_t skipped_count() const noexcept;

private:
    std::vector<unsigned char> skipped_;
};

/// Worst violations of the field invariants over all levels.
struct FieldMonitor {
    /// max |u(0,t_k) - T0| over levels with a liquid region.
    double boundary_violation = 0.0;
    /// max |u - Tm| over solid nodes.
    double solid_violation = 0.0;
    /// max of (Tm - u) and (u - T0), clipped at 0.
    double max_principle_violation = 0.0;
    /// Location of the worst max-principle violation.
    std::size_t worst_node = 0;
    std::size_t worst_level = 0;
};

FieldMonitor monitor_field(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys);

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_FIELD_HPP
