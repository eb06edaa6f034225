#include "memstefan/fraccalc.hpp"

#include <cmath>
#include <string>

#include "memstefan/error.hpp"

namespace memstefan::frac {

FracOrder::FracOrder(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw InputError("fractional order must lie in (0,1], got " + std::to_string(beta), "beta");
    }
}

SampledFunction::SampledFunction(double start, double step, std::vector<double> values)
    : start_(start), step_(step), values_(std::move(values)) {
    if (!std::isfinite(start_)) {
        throw InputError("sampled function start must be finite", "start");
    }
    if (!(step_ > 0.0) || !std::isfinite(step_)) {
        throw InputError("sampled function step must be positive and finite", "step");
    }
    if (values_.size() < 2) {
        throw InputError("sampled function needs at least 2 samples", "values");
    }
    for (std::size_t n = 0; n < values_.size(); ++n) {
        if (!std::isfinite(values_[n])) {
            throw InputError("non-finite sample at index " + std::to_string(n), "values");
        }
    }
}

SampledFunction SampledFunction::with_values(std::vector<double> values) const {
    if (values.size() != values_.size()) {
        throw InputError("replacement samples must match the grid size", "values");
    }
    return {start_, step_, std::move(values)};
}

namespace {

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
    if (f.size() != g.size() || f.start() != g.start() || f.step() != g.step()) {
        throw InputError("sampled functions live on different grids");
    }
}

} // namespace

SampledFunction operator+(const SampledFunction& f, const SampledFunction& g) {
    require_same_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        v[n] = f[n] + g[n];
    }
    return f.with_values(std::move(v));
}

SampledFunction operator-(const SampledFunction& f, const SampledFunction& g) {
    require_same_grid(f, g);
    std::vector<double> v(f.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        v[n] = f[n] - g[n];
    }
    return f.with_values(std::move(v));
}

SampledFunction operator*(double a, const SampledFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        v[n] = a * f[n];
    }
    return f.with_values(std::move(v));
}

} // namespace memstefan::frac
