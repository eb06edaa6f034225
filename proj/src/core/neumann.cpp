#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "memstefan/core/neumann.hpp"
#include "memstefan/error.hpp"

namespace memstefan::core {

namespace {

double transcendental(double x) {
    return std::sqrt(std::numbers::pi) * x * std::exp(x * x) * std::erf(x);
}

} // namespace

double neumann_lambda(double ste) {
    if (!(ste > 0.0) || !std::isfinite(ste)) {
        throw InputError("the Stefan number must be positive", "Ste");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (transcendental(hi) < ste) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) {
            throw InputError("could not bracket the Neumann root", "Ste");
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (transcendental(mid) < ste ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

NeumannSolution::NeumannSolution(const PhysicalParams& phys) : phys_(phys), lambda_(0.0) {
    phys_.validate();
    lambda_ = neumann_lambda(phys_.stefan_number());
}

double NeumannSolution::front(double t) const {
    return 2.0 * lambda_ * std::sqrt(phys_.diffusivity() * std::max(t, 0.0));
}

double NeumannSolution::velocity(double t) const {
    return lambda_ * std::sqrt(phys_.diffusivity() / t);
}

double NeumannSolution::melt_time(double x) const {
    return x * x / (4.0 * lambda_ * lambda_ * phys_.diffusivity());
}

double NeumannSolution::temperature(double x, double t) const {
    if (x >= front(t)) {
        return phys_.Tm;
    }
    const double eta = x / (2.0 * std::sqrt(phys_.diffusivity() * t));
    return phys_.T0 - (phys_.T0 - phys_.Tm) * std::erf(eta) / std::erf(lambda_);
}

double NeumannSolution::gradient(double x, double t) const {
    const double root = 2.0 * std::sqrt(phys_.diffusivity() * t);
    const double eta = x / root;
    return -(phys_.T0 - phys_.Tm) / std::erf(lambda_) * 2.0 / std::sqrt(std::numbers::pi) * std::exp(-eta * eta) /
           root;
}

NeumannSample NeumannSolution::sample(double dx, double dt, std::size_t levels) const {
    std::vector<double> s(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        s[k] = front(static_cast<double>(k) * dt);
    }
    const std::size_t reached = nodes_below(s.back(), dx);
    std::vector<double> h(reached);
    const double t_end = static_cast<double>(levels - 1) * dt;
    for (std::size_t i = 0; i < reached; ++i) {
        h[i] = std::min(melt_time(static_cast<double>(i) * dx), t_end);
    }
    FrontHistory fh(0.0, dt, std::move(s), dx, std::move(h));
    auto field = TemperatureField::sample(fh, phys_.Tm, [this](double x, double t) { return temperature(x, t); });
    return {lambda_, std::move(fh), std::move(field)};
}

} // namespace memstefan::core
