#include <cmath>
#include <string>

#include "memstefan/core/params.hpp"
#include "memstefan/error.hpp"

namespace memstefan::core {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw InputError(std::string(name) + " must be a finite positive number", name);
    }
}

} // namespace

void PhysicalParams::validate() const {
    require_positive(k, "k");
    require_positive(rho, "rho");
    require_positive(c, "c");
    require_positive(l, "l");
    if (!std::isfinite(T0) || !std::isfinite(Tm)) {
        throw InputError("T0 and Tm must be finite", std::isfinite(T0) ? "Tm" : "T0");
    }
    if (!(T0 > Tm)) {
        throw InputError("the boundary temperature must exceed the melt temperature (u(0,t) = T0 > Tm)", "T0");
    }
}

void MemoryParams::validate() const {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > 1.0) {
        throw InputError("alpha must lie in (0,1]", "alpha");
    }
    require_positive(mu, "mu");
    if (alpha == 1.0 && mu != 1.0) {
        throw InputError("mu must equal 1 when alpha = 1", "mu");
    }
}

PhysicalParams nondimensional(const PhysicalParams& phys) {
    return {1.0, 1.0, 1.0, phys.l / phys.c, phys.T0, phys.Tm};
}

} // namespace memstefan::core
