#include <algorithm>
#include <cmath>
#include <limits>

#include "memstefan/core/history.hpp"
#include "memstefan/error.hpp"

namespace memstefan::core {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLevelSlack = 1e-9;

struct Point {
    double x;
    double f;
};

// Liquid node j of level k, or the front point (s, Tm) for j == m.
Point stencil_point(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t m, std::size_t j,
                    std::size_t k) {
    if (j == m) {
        return {front.position(k), Tm};
    }
    return {front.node(j), u(j, k)};
}

double slope_of(const Point& a, const Point& b, const Point& c, double z) {
    const double x[3] = {a.x, b.x, c.x};
    const double f[3] = {a.f, b.f, c.f};
    return lagrange_slope(x, f, z);
}

// Level index whose time equals t, if any.
std::ptrdiff_t level_at(const FrontHistory& front, double t) {
    const double r = (t - front.t0()) / front.dt();
    const double k = std::round(r);
    if (std::abs(r - k) <= kLevelSlack && k >= 0.0 && k < static_cast<double>(front.levels())) {
        return static_cast<std::ptrdiff_t>(k);
    }
    return -1;
}

template <class Value, class Start>
NodeHistory build_history(const FrontHistory& front, std::size_t i, std::size_t k, Value value, Start start_value) {
    const double h = front.node_melt_time(i);
    std::vector<double> times{h};
    std::vector<double> values;
    const std::ptrdiff_t kh = level_at(front, h);
    if (kh >= 0 && front.liquid(i, static_cast<std::size_t>(kh))) {
        values.push_back(value(static_cast<std::size_t>(kh)));
    } else {
        values.push_back(start_value(h));
    }
    for (std::size_t j = 0; j <= k; ++j) {
        if (front.time(j) > h + kLevelSlack * front.dt()) {
            times.push_back(front.time(j));
            values.push_back(value(j));
        }
    }
    return {std::move(times), std::move(values)};
}

} // namespace

NodeHistory::NodeHistory(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size()) {
        throw InputError("node history needs matching, nonempty times and values", "times");
    }
    for (std::size_t j = 1; j < times_.size(); ++j) {
        if (!(times_[j] > times_[j - 1])) {
            throw InputError("node history times must be strictly increasing", "times");
        }
    }
}

double NodeHistory::operator()(double t) const {
    if (t <= times_.front()) {
        return values_.front();
    }
    if (t >= times_.back()) {
        return values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto j = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

frac::SampledFunction NodeHistory::resample(double step) const {
    if (size() < 2) {
        throw InputError("node history needs at least 2 samples to resample", "times");
    }
    const double span = end() - start();
    const auto intervals = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(span / step - kLevelSlack)));
    const double h = span / static_cast<double>(intervals);
    std::vector<double> v(intervals + 1);
    std::size_t j = 1;
    for (std::size_t n = 0; n <= intervals; ++n) {
        const double t = n == intervals ? end() : start() + static_cast<double>(n) * h;
        while (j + 1 < times_.size() && times_[j] < t) {
            ++j;
        }
        const double w = std::clamp((t - times_[j - 1]) / (times_[j] - times_[j - 1]), 0.0, 1.0);
        v[n] = values_[j - 1] + w * (values_[j] - values_[j - 1]);
    }
    return {start(), h, std::move(v)};
}

double lagrange_slope(const double (&x)[3], const double (&f)[3], double z) noexcept {
    const double d01 = x[0] - x[1];
    const double d02 = x[0] - x[2];
    const double d12 = x[1] - x[2];
    return f[0] * (2.0 * z - x[1] - x[2]) / (d01 * d02) - f[1] * (2.0 * z - x[0] - x[2]) / (d01 * d12) +
           f[2] * (2.0 * z - x[0] - x[1]) / (d02 * d12);
}

double lagrange_curvature(const double (&x)[3], const double (&f)[3]) noexcept {
    const double d01 = x[0] - x[1];
    const double d02 = x[0] - x[2];
    const double d12 = x[1] - x[2];
    return 2.0 * (f[0] / (d01 * d02) - f[1] / (d01 * d12) + f[2] / (d02 * d12));
}

double level_slopes(std::span<const double> u, double dx, double s, double Tm, std::span<double> slopes) {
    const std::size_t m = u.size();
    auto p = [&](std::size_t j) -> Point {
        if (j == m) {
            return {s, Tm};
        }
        return {static_cast<double>(j) * dx, u[j]};
    };
    if (m == 1) {
        const double g = (Tm - u[0]) / s;
        slopes[0] = g;
        return g;
    }
    const bool crowded = s - p(m - 1).x < 0.25 * dx && m >= 3;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == 0) {
            slopes[i] = slope_of(p(0), p(1), p(2), 0.0);
        } else if (i == m - 1 && crowded) {
            slopes[i] = slope_of(p(m - 3), p(m - 2), p(m), p(i).x);
        } else {
            slopes[i] = slope_of(p(i - 1), p(i), p(i + 1), p(i).x);
        }
    }
    return crowded ? slope_of(p(m - 3), p(m - 2), p(m), s) : slope_of(p(m - 2), p(m - 1), p(m), s);
}

GradientField::GradientField(const TemperatureField& u, const FrontHistory& front, double Tm)
    : nodes_(u.nodes()), t0_(front.t0()), dt_(front.dt()), node_(u.nodes() * u.levels(), 0.0),
      front_(u.levels(), kNaN) {
    if (!u.matches(front)) {
        throw InputError("temperature field and front history use different grids", "field");
    }
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const std::size_t m = front.liquid_count(k);
        if (m == 0) {
            continue;
        }
        front_[k] = level_slopes(u.level(k).first(m), front.dx(), front.position(k), Tm,
                                 std::span<double>(node_.data() + k * nodes_, m));
    }
}

double GradientField::front_at(double t) const {
    const std::size_t last = front_.size() - 1;
    const double r = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(last));
    auto k = std::min(static_cast<std::size_t>(std::floor(r)), last);
    const double w = r - static_cast<double>(k);
    const std::size_t k1 = std::min(k + 1, last);
    const bool lo_ok = !std::isnan(front_[k]);
    const bool hi_ok = !std::isnan(front_[k1]);
    if (lo_ok && hi_ok) {
        return front_[k] + w * (front_[k1] - front_[k]);
    }
    if (lo_ok) {
        return front_[k];
    }
    for (std::size_t j = k1; j <= last; ++j) {
        if (!std::isnan(front_[j])) {
            return front_[j];
        }
    }
    return kNaN;
}

double curvature(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t i, std::size_t k) {
    const std::size_t m = front.liquid_count(k);
    if (i == 0 || i >= m) {
        throw DomainError("curvature: node is not an interior liquid node");
    }
    const Point a = stencil_point(u, front, Tm, m, i - 1, k);
    const Point b = stencil_point(u, front, Tm, m, i, k);
    const Point c = stencil_point(u, front, Tm, m, i + 1, k);
    const double x[3] = {a.x, b.x, c.x};
    const double f[3] = {a.f, b.f, c.f};
    return lagrange_curvature(x, f);
}

NodeHistory temperature_history(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t i,
                                std::size_t k) {
    return build_history(
        front, i, k, [&](std::size_t j) { return u(i, j); }, [&](double) { return Tm; });
}

NodeHistory gradient_history(const GradientField& grad, const FrontHistory& front, std::size_t i, std::size_t k) {
    return build_history(
        front, i, k, [&](std::size_t j) { return grad(i, j); }, [&](double h) { return grad.front_at(h); });
}

} // namespace memstefan::core
