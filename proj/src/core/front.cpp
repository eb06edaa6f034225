#include <algorithm>
#include <cmath>

#include "memstefan/core/front.hpp"
#include "memstefan/error.hpp"

namespace memstefan::core {

std::size_t nodes_below(double x, double dx) noexcept {
    if (!(x > 0.0)) {
        return 0;
    }
    auto count = static_cast<std::size_t>(std::ceil(x / dx));
    while (count > 0 && static_cast<double>(count - 1) * dx >= x) {
        --count;
    }
    while (static_cast<double>(count) * dx < x) {
        ++count;
    }
    return count;
}

namespace {

double inverse(std::span<const double> s, double t0, double dt, double x) {
    const auto it = std::lower_bound(s.begin(), s.end(), x);
    const auto k = static_cast<std::size_t>(it - s.begin());
    if (k == 0) {
        return t0;
    }
    const double lo = s[k - 1];
    const double hi = s[k];
    const double frac = (x - lo) / (hi - lo);
    return t0 + (static_cast<double>(k - 1) + frac) * dt;
}

} // namespace

FrontHistory::FrontHistory(double t0, double dt, std::vector<double> positions, double dx,
                           std::vector<double> node_melt_times)
    : t0_(t0), dt_(dt), dx_(dx), positions_(std::move(positions)), melt_times_(std::move(node_melt_times)) {
    if (!std::isfinite(t0)) {
        throw InputError("front start time must be finite", "t0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InputError("front time step must be positive", "dt");
    }
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw InputError("space step must be positive", "dx");
    }
    if (positions_.size() < 2) {
        throw InputError("front history needs at least 2 levels", "positions");
    }
    for (std::size_t k = 0; k < positions_.size(); ++k) {
        if (!std::isfinite(positions_[k]) || positions_[k] < 0.0) {
            throw InputError("front positions must be finite and nonnegative", "positions");
        }
        if (k > 0 && positions_[k] < positions_[k - 1]) {
            throw InputError("front positions must be nondecreasing", "positions");
        }
    }
    if (melt_times_.size() != nodes_below(reach(), dx_)) {
        throw InputError("one melt time is required for every node behind the front", "node_melt_times");
    }
    const double t_end = end_time();
    for (std::size_t i = 0; i < melt_times_.size(); ++i) {
        const double h = melt_times_[i];
        if (!std::isfinite(h) || h < t0_ || h > t_end) {
            throw InputError("node melt times must lie in the front's time range", "node_melt_times");
        }
        if (i > 0 && h < melt_times_[i - 1]) {
            throw InputError("node melt times must be nondecreasing in x", "node_melt_times");
        }
    }
}

FrontHistory FrontHistory::from_positions(double t0, double dt, std::vector<double> positions, double dx) {
    if (positions.empty() || !(dx > 0.0)) {
        return {t0, dt, std::move(positions), dx, {}};
    }
    const std::size_t count = nodes_below(positions.back(), dx);
    std::vector<double> h(count);
    for (std::size_t i = 0; i < count; ++i) {
        h[i] = inverse(positions, t0, dt, static_cast<double>(i) * dx);
    }
    return {t0, dt, std::move(positions), dx, std::move(h)};
}

std::size_t FrontHistory::liquid_count(std::size_t k) const noexcept {
    return std::min(nodes_below(positions_[k], dx_), melt_times_.size());
}

double FrontHistory::melt_time(double x) const {
    if (!(x >= 0.0) || x > reach()) {
        throw DomainError("melt_time: x lies outside [0, max front position]");
    }
    return inverse(positions_, t0_, dt_, x);
}

double FrontHistory::velocity(std::size_t k) const {
    const std::size_t n = positions_.size();
    if (k >= n) {
        throw DomainError("velocity: level out of range");
    }
    const auto& s = positions_;
    if (n == 2) {
        return (s[1] - s[0]) / dt_;
    }
    if (k == 0) {
        return (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * dt_);
    }
    if (k == n - 1) {
        return (3.0 * s[k] - 4.0 * s[k - 1] + s[k - 2]) / (2.0 * dt_);
    }
    return (s[k + 1] - s[k - 1]) / (2.0 * dt_);
}

bool FrontHistory::strictly_increasing() const noexcept {
    for (std::size_t k = 1; k < positions_.size(); ++k) {
        if (!(positions_[k] > positions_[k - 1])) {
            return false;
        }
    }
    return true;
}

} // namespace memstefan::core
