#include <algorithm>
#include <cmath>

#include "memstefan/core/residuals.hpp"
#include "memstefan/error.hpp"
#include "terms.hpp"

namespace memstefan::core {

namespace detail {

std::vector<std::size_t> select_levels(const FrontHistory& front, const ResidualOptions& opts) {
    std::vector<std::size_t> out;
    auto keep = [&](std::size_t k) { return k < front.levels() && front.time(k) >= opts.from_time; };
    if (opts.levels.empty()) {
        for (std::size_t k = 0; k < front.levels(); ++k) {
            if (keep(k)) {
                out.push_back(k);
            }
        }
    } else {
        for (std::size_t k : opts.levels) {
            if (keep(k)) {
                out.push_back(k);
            }
        }
    }
    return out;
}

std::optional<double> gradient_memory(const GradientField& grad, const FrontHistory& front, const MemoryParams& mem,
                                      std::size_t i, std::size_t k) {
    if (mem.classical()) {
        return grad(i, k);
    }
    const NodeHistory history = gradient_history(grad, front, i, k);
    if (history.size() < 2) {
        return std::nullopt;
    }
    // D^{1-a} g = g(h) (t-h)^{a-1} / Gamma(a) + D^{1-a} [g - g(h)].
    const auto sampled = history.resample(front.dt());
    const double g0 = sampled[0];
    std::vector<double> shifted(sampled.values().begin(), sampled.values().end());
    for (double& v : shifted) {
        v -= g0;
    }
    const double elapsed = sampled.end() - sampled.start();
    return g0 * std::pow(elapsed, mem.alpha - 1.0) / std::tgamma(mem.alpha) +
           frac::rl_derivative_at_end(sampled.with_values(std::move(shifted)), frac::FracOrder(1.0 - mem.alpha));
}

double temperature_caputo(const TemperatureField& u, const FrontHistory& front, double Tm, double beta, std::size_t i,
                          std::size_t k) {
    const NodeHistory history = temperature_history(u, front, Tm, i, k);
    return frac::caputo_derivative_at_end(history.resample(front.dt()), frac::FracOrder(beta));
}

std::optional<std::size_t> last_mature(const FrontHistory& front, std::size_t k) {
    for (std::size_t i = front.liquid_count(k); i-- > 0;) {
        if (mature(front, i, k)) {
            return i;
        }
    }
    return std::nullopt;
}

double extrapolate_to_front(const FrontHistory& front, std::size_t k, std::size_t b, double at_b_minus_1,
                            double at_b) {
    if (b == 0) {
        return at_b;
    }
    const double reach = front.position(k) - front.node(b);
    return at_b + reach * (at_b - at_b_minus_1) / front.dx();
}

double normalized(double residual, double scale) noexcept {
    return scale > 0.0 ? residual / scale : residual;
}

} // namespace detail

namespace {

// I^{1-a} of the flux history of node i from h(x_i). The flux may carry a
// term c (t-h)^{a-1}; c is the limit at h of J (t-h)^{1-a}, extrapolated
// linearly from the first two samples, and that term is integrated exactly
// (to c Gamma(a)). The remainder is extended linearly back to h.
double flux_memory_integral(const FluxField& J, const FrontHistory& front, const MemoryParams& mem, std::size_t i,
                            std::size_t k) {
    const double a = mem.alpha;
    const double h = front.node_melt_time(i);
    std::vector<double> times;
    std::vector<double> values;
    for (std::size_t j = 0; j <= k; ++j) {
        if (front.liquid(i, j) && !J.skipped(i, j) && front.time(j) > h) {
            times.push_back(front.time(j));
            values.push_back(J(i, j));
        }
    }
    if (times.empty()) {
        return 0.0;
    }
    auto weighted = [&](std::size_t j) { return values[j] * std::pow(times[j] - h, 1.0 - a); };
    double c = weighted(0);
    if (times.size() >= 2) {
        c += (h - times[0]) * (weighted(1) - weighted(0)) / (times[1] - times[0]);
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
        values[j] -= c * std::pow(times[j] - h, a - 1.0);
    }
    double start = values.front();
    if (values.size() >= 2) {
        start += (h - times[0]) * (values[1] - values[0]) / (times[1] - times[0]);
    }
    times.insert(times.begin(), h);
    values.insert(values.begin(), start);
    const NodeHistory history(std::move(times), std::move(values));
    const auto sampled = history.resample(front.dt());
    return c * std::tgamma(a) + frac::rl_integral_at(sampled, frac::FracOrder(1.0 - a), sampled.last());
}

} // namespace

FluxField memory_flux(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                      const MemoryParams& mem) {
    phys.validate();
    mem.validate();
    const GradientField grad(u, front, phys.Tm);
    const std::size_t nodes = u.nodes();
    std::vector<double> values(nodes * u.levels(), 0.0);
    std::vector<unsigned char> skipped(values.size(), 0);
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const std::size_t m = front.liquid_count(k);
        for (std::size_t i = 0; i < m; ++i) {
            const auto f = detail::gradient_memory(grad, front, mem, i, k);
            if (f) {
                values[k * nodes + i] = -phys.k * mem.mu * *f;
            } else {
                skipped[k * nodes + i] = 1;
            }
        }
    }
    return {GridField(u.dx(), nodes, u.t0(), u.dt(), u.levels(), std::move(values)), std::move(skipped)};
}

double implicit_flux_residual(const FluxField& J, const TemperatureField& u, const FrontHistory& front,
                              const PhysicalParams& phys, const MemoryParams& mem, const ResidualOptions& opts) {
    phys.validate();
    mem.validate();
    if (!J.matches(front) || J.nodes() != u.nodes()) {
        throw InputError("flux field and temperature field use different grids", "flux");
    }
    const GradientField grad(u, front, phys.Tm);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k : detail::select_levels(front, opts)) {
        const std::size_t m = front.liquid_count(k);
        for (std::size_t i = 0; i < m; ++i) {
            if (!mature(front, i, k) || J.skipped(i, k)) {
                continue;
            }
            const double ku = phys.k * grad(i, k);
            double integral;
            if (mem.classical()) {
                integral = J(i, k);
            } else {
                integral = flux_memory_integral(J, front, mem, i, k);
            }
            worst = std::max(worst, std::abs(integral / mem.mu + ku));
            scale = std::max(scale, std::abs(ku));
        }
    }
    return detail::normalized(worst, scale);
}

} // namespace memstefan::core
