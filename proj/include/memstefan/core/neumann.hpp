#ifndef MEMSTEFAN_CORE_NEUMANN_HPP
#define MEMSTEFAN_CORE_NEUMANN_HPP

#include <cstddef>

#include "memstefan/core/field.hpp"
#include "memstefan/core/front.hpp"
#include "memstefan/core/params.hpp"

namespace memstefan::core {

struct NeumannSample {
    double lambda;
    FrontHistory front;
    TemperatureField field;
};

/// Classical similarity solution of the one-phase problem (alpha = 1):
/// s(t) = 2 lambda sqrt(d t), u = T0 - (T0 - Tm) erf(x / (2 sqrt(d t))) / erf(lambda),
/// where sqrt(pi) lambda exp(lambda^2) erf(lambda) = Ste.
class NeumannSolution {
public:
    explicit NeumannSolution(const PhysicalParams& phys);

    double lambda() const noexcept { return lambda_; }
    const PhysicalParams& params() const noexcept { return phys_; }

    double front(double t) const;
    double velocity(double t) const;
    double melt_time(double x) const;
    /// Tm on and beyond the front; T0 at x = 0 for t > 0.
    double temperature(double x, double t) const;
    double gradient(double x, double t) const;

    /// Exact front on t_k = k dt, k = 0..levels-1, with exact node melt
    /// times, and the exact field on front.nodes_reached() + 1 nodes.
    NeumannSample sample(double dx, double dt, std::size_t levels) const;

private:
    PhysicalParams phys_;
    double lambda_;
};

/// Root of sqrt(pi) x exp(x^2) erf(x) = ste by bisection to full double
/// precision. Throws InputError unless ste > 0.
double neumann_lambda(double ste);

inline NeumannSolution neumann_oracle(const PhysicalParams& phys) {
    return NeumannSolution(phys);
}

} // namespace memstefan::core

#endif // MEMSTEFAN_CORE_NEUMANN_HPP
