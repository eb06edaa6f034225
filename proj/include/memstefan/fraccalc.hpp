#ifndef MEMSTEFAN_FRACCALC_HPP
#define MEMSTEFAN_FRACCALC_HPP

/**
 * @file fraccalc.hpp
 * @brief Riemann-Liouville and Caputo operators of order in (0,1] on
 *        uniformly sampled functions with an arbitrary lower limit.
 *
 * All operators act on a SampledFunction f(a), f(a+dt), ..., f(a+N dt) and
 * return samples on the same grid.
 *
 * - rl_integral: product-trapezoidal rule. f is replaced by its piecewise
 *   linear interpolant and the weakly singular kernel is integrated exactly
 *   against it, so the kernel is never evaluated at tau = t.
 * - rl_derivative: derivative of rl_integral of the complementary order,
 *   taken by second-order finite differences (one-sided at the first interior
 *   node and at the last node, central elsewhere).
 * - caputo_derivative: L1 scheme (piecewise-constant slopes against exact
 *   kernel moments).
 *
 * The first node t = a is where the RL derivative and the RL-Caputo gap are
 * singular; values reported there are finite placeholders and every residual
 * norm in this library skips it.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace memstefan::frac {

/// Fractional order beta with 0 < beta <= 1.
class FracOrder {
public:
    explicit FracOrder(double beta);

    double value() const noexcept { return beta_; }
    bool is_one() const noexcept { return beta_ == 1.0; }
    /// 1 - beta, which is only a valid FracOrder when beta < 1.
    double complement() const noexcept { return 1.0 - beta_; }

private:
    double beta_;
};

/// Samples of f on the uniform grid start + n * step, n = 0..size()-1.
class SampledFunction {
public:
    SampledFunction(double start, double step, std::vector<double> values);

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return values_.size(); }
    /// Index of the last sample (N).
    std::size_t last() const noexcept { return values_.size() - 1; }
    double time(std::size_t n) const noexcept { return start_ + static_cast<double>(n) * step_; }
    double end() const noexcept { return time(last()); }

    double operator[](std::size_t n) const noexcept { return values_[n]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Same grid, new samples.
    SampledFunction with_values(std::vector<double> values) const;

    template <class F>
    static SampledFunction sample(double start, double step, std::size_t count, F&& f) {
        std::vector<double> v(count);
        for (std::size_t n = 0; n < count; ++n) {
            v[n] = f(start + static_cast<double>(n) * step);
        }
        return {start, step, std::move(v)};
    }

private:
    double start_;
    double step_;
    std::vector<double> values_;
};

SampledFunction operator+(const SampledFunction& f, const SampledFunction& g);
SampledFunction operator-(const SampledFunction& f, const SampledFunction& g);
SampledFunction operator*(double a, const SampledFunction& f);

/// Second-order finite-difference derivative: central in the interior,
/// three-point one-sided at both ends. Requires >= 3 samples.
SampledFunction fd_derivative(const SampledFunction& f);

SampledFunction rl_integral(const SampledFunction& f, FracOrder beta);
SampledFunction rl_derivative(const SampledFunction& f, FracOrder beta);
SampledFunction caputo_derivative(const SampledFunction& f, FracOrder beta);

/// rl_derivative - caputo_derivative - f(a)(t-a)^-beta / Gamma(1-beta).
/// Zero at the first node by convention.
SampledFunction rl_caputo_gap(const SampledFunction& f, FracOrder beta);

/// rl_derivative(rl_integral(f, beta), beta) - f.
SampledFunction left_inverse_residual(const SampledFunction& f, FracOrder beta);

// Single-node evaluators. They agree with the corresponding entry of the
// whole-grid operators and cost O(N) instead of O(N^2).

double rl_integral_at(const SampledFunction& f, FracOrder beta, std::size_t n);
/// Value of rl_derivative(f, beta) at the last node.
double rl_derivative_at_end(const SampledFunction& f, FracOrder beta);
/// Value of caputo_derivative(f, beta) at the last node.
double caputo_derivative_at_end(const SampledFunction& f, FracOrder beta);

enum class Operator { RlIntegral, RlDerivative, Caputo };

std::string to_string(Operator op);

struct LimitProbeRow {
    double beta;
    Operator op;
    /// max over nodes n >= 1 of |op(f) - limit|, where the limit is f for the
    /// integral and fd_derivative(f) for both derivatives.
    double max_deviation;
};

/// Deviation of each operator from its integer-order limit, for each beta.
/// Returns one row per (beta, operator) in the order given.
std::vector<LimitProbeRow> limit_probe(const SampledFunction& f, std::span<const FracOrder> betas);

/// True when `deviations` decreases along the sequence, allowing increases no
/// larger than `noise_floor`.
bool is_monotone_decreasing(std::span<const double> deviations, double noise_floor = 0.0);

/// Weights of the product-trapezoidal rule and the L1 scheme for one order.
/// Entries are scale free; the step enters as step^beta / Gamma(beta + 2).
struct KernelWeights {
    double beta = 0.0;
    /// interior[k] = (k+1)^(b+1) - 2 k^(b+1) + (k-1)^(b+1), k >= 1; interior[0] = 1.
    std::vector<double> interior;
    /// first[n] = (n-1)^(b+1) - (n-1-b) n^b, n >= 1; first[0] unused.
    std::vector<double> first;
    /// l1[k] = (k+1)^(1-b) - k^(1-b) for the Caputo L1 scheme (b < 1 only).
    std::vector<double> l1;

    std::size_t capacity() const noexcept { return interior.size(); }
};

/// Thread-safe cache of kernel weights keyed by order. Entries are immutable
/// once published; a request for more nodes than cached replaces the entry
/// with a longer one (every table is a prefix of the longer one).
class WeightCache {
public:
    static WeightCache& instance();

    std::shared_ptr<const KernelWeights> get(double beta, std::size_t nodes);
    std::size_t entries() const;
    void clear();

private:
    WeightCache() = default;

    mutable std::shared_mutex mutex_;
    std::map<double, std::shared_ptr<const KernelWeights>> table_;
};

} // namespace memstefan::frac

#endif // MEMSTEFAN_FRACCALC_HPP
