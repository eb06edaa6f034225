#include <algorithm>
#include <cmath>

#include "memstefan/core/field.hpp"
#include "memstefan/error.hpp"

namespace memstefan::core {

GridField::GridField(double dx, std::size_t nodes, double t0, double dt, std::size_t levels,
                     std::vector<double> values)
    : dx_(dx), nodes_(nodes), t0_(t0), dt_(dt), levels_(levels), values_(std::move(values)) {
    if (!(dx > 0.0) || !(dt > 0.0)) {
        throw InputError("field steps must be positive", dx > 0.0 ? "dt" : "dx");
    }
    if (nodes == 0 || levels == 0) {
        throw InputError("field needs at least one node and one level", "values");
    }
    if (values_.size() != nodes * levels) {
        throw InputError("field values do not match nodes x levels", "values");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InputError("field values must be finite", "values");
        }
    }
}

bool GridField::matches(const FrontHistory& front) const noexcept {
    return dx_ == front.dx() && dt_ == front.dt() && t0_ == front.t0() && levels_ == front.levels() &&
           nodes_ >= front.nodes_reached();
}

FluxField::FluxField(GridField values, std::vector<unsigned char> skipped)
    : GridField(std::move(values)), skipped_(std::move(skipped)) {
    if (skipped_.size() != nodes() * levels()) {
        throw InputError("skip flags do not match the flux grid", "skipped");
    }
}

std::size_t FluxField::skipped_count() const noexcept {
    return static_cast<std::size_t>(std::count(skipped_.begin(), skipped_.end(), 1));
}

FieldMonitor monitor_field(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys) {
    if (!u.matches(front)) {
        throw InputError("temperature field and front history use different grids", "field");
    }
    FieldMonitor m;
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const std::size_t liquid = front.liquid_count(k);
        if (liquid > 0) {
            m.boundary_violation = std::max(m.boundary_violation, std::abs(u(0, k) - phys.T0));
        }
        for (std::size_t i = 0; i < u.nodes(); ++i) {
            const double v = u(i, k);
            if (i >= liquid) {
                m.solid_violation = std::max(m.solid_violation, std::abs(v - phys.Tm));
            }
            const double over = std::max({phys.Tm - v, v - phys.T0, 0.0});
            if (over > m.max_principle_violation) {
                m.max_principle_violation = over;
                m.worst_node = i;
                m.worst_level = k;
            }
        }
    }
    return m;
}

} // namespace memstefan::core
