#include <algorithm>
#include <cmath>

#include "memstefan/error.hpp"
#include "memstefan/fraccalc.hpp"

namespace memstefan::frac {

namespace {

void require_samples(const SampledFunction& f, std::size_t count, const char* what) {
    if (f.size() < count) {
        throw InputError(std::string(what) + " needs at least " + std::to_string(count) + " samples, got " +
                             std::to_string(f.size()),
                         "values");
    }
}

double trapezoid_scale(double beta, double step) {
    return std::pow(step, beta) / std::tgamma(beta + 2.0);
}

double rl_integral_node(const SampledFunction& f, const KernelWeights& w, double scale, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    double acc = w.first[n] * f[0];
    for (std::size_t j = 1; j <= n; ++j) {
        acc += w.interior[n - j] * f[j];
    }
    return scale * acc;
}

double l1_node(const SampledFunction& f, const KernelWeights& w, double scale, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        acc += w.l1[n - j] * (f[j] - f[j - 1]);
    }
    return scale * acc;
}

double forward_difference(std::span<const double> g, std::size_t n, double h) {
    return (-3.0 * g[n] + 4.0 * g[n + 1] - g[n + 2]) / (2.0 * h);
}

double backward_difference(std::span<const double> g, std::size_t n, double h) {
    return (3.0 * g[n] - 4.0 * g[n - 1] + g[n - 2]) / (2.0 * h);
}

// Derivative of the grid function g: one-sided at node 0, at node 1 (when
// enough samples exist) and at the last node; central elsewhere.
std::vector<double> differentiate(std::span<const double> g, double h) {
    const std::size_t size = g.size();
    const std::size_t last = size - 1;
    std::vector<double> d(size);
    d[0] = forward_difference(g, 0, h);
    for (std::size_t n = 1; n < last; ++n) {
        d[n] = (g[n + 1] - g[n - 1]) / (2.0 * h);
    }
    if (size >= 4) {
        d[1] = forward_difference(g, 1, h);
    }
    d[last] = backward_difference(g, last, h);
    return d;
}

double singular_power(double beta, double elapsed) {
    if (beta == 1.0) {
        return 0.0; // 1 / Gamma(0)
    }
    return std::pow(elapsed, -beta) / std::tgamma(1.0 - beta);
}

} // namespace

SampledFunction fd_derivative(const SampledFunction& f) {
    require_samples(f, 3, "fd_derivative");
    const std::size_t last = f.last();
    const double h = f.step();
    std::vector<double> d(f.size());
    d[0] = forward_difference(f.values(), 0, h);
    for (std::size_t n = 1; n < last; ++n) {
        d[n] = (f[n + 1] - f[n - 1]) / (2.0 * h);
    }
    d[last] = backward_difference(f.values(), last, h);
    return f.with_values(std::move(d));
}

SampledFunction rl_integral(const SampledFunction& f, FracOrder beta) {
    const double b = beta.value();
    const auto w = WeightCache::instance().get(b, f.size());
    const double scale = trapezoid_scale(b, f.step());
    std::vector<double> g(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        g[n] = rl_integral_node(f, *w, scale, n);
    }
    return f.with_values(std::move(g));
}

double rl_integral_at(const SampledFunction& f, FracOrder beta, std::size_t n) {
    if (n >= f.size()) {
        throw DomainError("rl_integral_at: node index out of range");
    }
    const double b = beta.value();
    const auto w = WeightCache::instance().get(b, n + 1);
    return rl_integral_node(f, *w, trapezoid_scale(b, f.step()), n);
}

SampledFunction rl_derivative(const SampledFunction& f, FracOrder beta) {
    require_samples(f, 3, "rl_derivative");
    if (beta.is_one()) {
        return fd_derivative(f);
    }
    const SampledFunction g = rl_integral(f, FracOrder(beta.complement()));
    return f.with_values(differentiate(g.values(), f.step()));
}

double rl_derivative_at_end(const SampledFunction& f, FracOrder beta) {
    require_samples(f, 3, "rl_derivative");
    const std::size_t last = f.last();
    if (beta.is_one()) {
        return backward_difference(f.values(), last, f.step());
    }
    const FracOrder order(beta.complement());
    const double g[3] = {rl_integral_at(f, order, last - 2), rl_integral_at(f, order, last - 1),
                         rl_integral_at(f, order, last)};
    return backward_difference(g, 2, f.step());
}

SampledFunction caputo_derivative(const SampledFunction& f, FracOrder beta) {
    require_samples(f, 3, "caputo_derivative");
    if (beta.is_one()) {
        return fd_derivative(f);
    }
    const double b = beta.value();
    const auto w = WeightCache::instance().get(b, f.size());
    const double scale = 1.0 / (std::tgamma(2.0 - b) * std::pow(f.step(), b));
    std::vector<double> c(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) {
        c[n] = l1_node(f, *w, scale, n);
    }
    return f.with_values(std::move(c));
}

double caputo_derivative_at_end(const SampledFunction& f, FracOrder beta) {
    require_samples(f, 3, "caputo_derivative");
    if (beta.is_one()) {
        return backward_difference(f.values(), f.last(), f.step());
    }
    const double b = beta.value();
    const auto w = WeightCache::instance().get(b, f.size());
    const double scale = 1.0 / (std::tgamma(2.0 - b) * std::pow(f.step(), b));
    return l1_node(f, *w, scale, f.last());
}

SampledFunction rl_caputo_gap(const SampledFunction& f, FracOrder beta) {
    const SampledFunction rl = rl_derivative(f, beta);
    const SampledFunction c = caputo_derivative(f, beta);
    std::vector<double> gap(f.size(), 0.0);
    for (std::size_t n = 1; n < f.size(); ++n) {
        const double elapsed = f.time(n) - f.start();
        gap[n] = rl[n] - c[n] - f[0] * singular_power(beta.value(), elapsed);
    }
    return f.with_values(std::move(gap));
}

SampledFunction left_inverse_residual(const SampledFunction& f, FracOrder beta) {
    require_samples(f, 3, "left_inverse_residual");
    const SampledFunction round_trip = rl_derivative(rl_integral(f, beta), beta);
    std::vector<double> r(f.size(), 0.0);
    for (std::size_t n = 1; n < f.size(); ++n) {
        r[n] = round_trip[n] - f[n];
    }
    return f.with_values(std::move(r));
}

std::string to_string(Operator op) {
    switch (op) {
    case Operator::RlIntegral:
        return "rl_integral";
    case Operator::RlDerivative:
        return "rl_derivative";
    case Operator::Caputo:
        return "caputo_derivative";
    }
    return "unknown";
}

std::vector<LimitProbeRow> limit_probe(const SampledFunction& f, std::span<const FracOrder> betas) {
    require_samples(f, 3, "limit_probe");
    const SampledFunction slope = fd_derivative(f);
    auto deviation = [](const SampledFunction& a, const SampledFunction& b) {
        double m = 0.0;
        for (std::size_t n = 1; n < a.size(); ++n) {
            m = std::max(m, std::abs(a[n] - b[n]));
        }
        return m;
    };
    std::vector<LimitProbeRow> rows;
    rows.reserve(3 * betas.size());
    for (const FracOrder& beta : betas) {
        rows.push_back({beta.value(), Operator::RlIntegral, deviation(rl_integral(f, beta), f)});
        rows.push_back({beta.value(), Operator::RlDerivative, deviation(rl_derivative(f, beta), slope)});
        rows.push_back({beta.value(), Operator::Caputo, deviation(caputo_derivative(f, beta), slope)});
    }
    return rows;
}

bool is_monotone_decreasing(std::span<const double> deviations, double noise_floor) {
    for (std::size_t i = 1; i < deviations.size(); ++i) {
        if (deviations[i] > deviations[i - 1] + noise_floor) {
            return false;
        }
    }
    return true;
}

} // namespace memstefan::frac
