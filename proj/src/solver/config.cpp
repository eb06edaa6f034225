#include <cmath>

#include "memstefan/error.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::solver {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw InputError(std::string(name) + " must be a finite positive number", name);
    }
}

} // namespace

std::string to_string(FrontUpdate mode) {
    return mode == FrontUpdate::IntegralRelation ? "integral" : "pointwise";
}

FrontUpdate parse_front_update(const std::string& name) {
    if (name == "integral" || name == "integral-relation") {
        return FrontUpdate::IntegralRelation;
    }
    if (name == "pointwise" || name == "pointwise-stefan") {
        return FrontUpdate::PointwiseStefan;
    }
    throw InputError("front_update must be 'integral' or 'pointwise', got '" + name + "'", "front_update");
}

void SolverConfig::validate() const {
    require_positive(dx, "dx");
    require_positive(dt, "dt");
    require_positive(t_end, "t_end");
    require_positive(t_seed, "t_seed");
    require_positive(newton_tol, "newton_tol");
    if (t_seed > t_end) {
        throw InputError("t_seed must not exceed t_end", "t_seed");
    }
    if (max_newton_iters < 1) {
        throw InputError("max_newton_iters must be at least 1", "max_newton_iters");
    }
    if (checkpoints < 0) {
        throw InputError("checkpoints must be nonnegative", "checkpoints");
    }
}

} // namespace memstefan::solver
