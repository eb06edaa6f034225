#include <algorithm>
#include <cmath>
#include <string>

#include "memstefan/core/residuals.hpp"
#include "memstefan/error.hpp"
#include "terms.hpp"

namespace memstefan::core {

namespace {

void check_grids(const TemperatureField& u, const FrontHistory& front) {
    if (!u.matches(front)) {
        throw InputError("temperature field and front history use different grids", "field");
    }
}

double source_term(const PhysicalParams& phys, const MemoryParams& mem, double elapsed) {
    if (mem.classical()) {
        return 0.0;
    }
    return phys.l / phys.c * std::pow(elapsed, -mem.alpha) / std::tgamma(1.0 - mem.alpha);
}

double time_derivative(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t i,
                       std::size_t k) {
    return detail::temperature_caputo(u, front, Tm, 1.0, i, k);
}

// Boundary trace of the Caputo derivative of order 1 - alpha at level k
// (u - u(h) when alpha = 1).
double caputo_trace(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                    const MemoryParams& mem, std::size_t k) {
    const auto b = detail::last_mature(front, k);
    if (!b) {
        return 0.0;
    }
    auto at = [&](std::size_t i) {
        if (mem.classical()) {
            const NodeHistory history = temperature_history(u, front, phys.Tm, i, k);
            return u(i, k) - history(history.start());
        }
        return detail::temperature_caputo(u, front, phys.Tm, 1.0 - mem.alpha, i, k);
    };
    const double vb = at(*b);
    const double va = *b > 0 ? at(*b - 1) : vb;
    return detail::extrapolate_to_front(front, k, *b, va, vb);
}

std::size_t level_of(const FrontHistory& front, double t, const char* field) {
    const double r = (t - front.t0()) / front.dt();
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-9 || k < 0.0 || k >= static_cast<double>(front.levels())) {
        throw DomainError(std::string(field) + " must be a grid time of the front history");
    }
    return static_cast<std::size_t>(k);
}

} // namespace

double continuity_residual(const TemperatureField& u, const FluxField& J, const FrontHistory& front,
                           const PhysicalParams& phys, const ResidualOptions& opts) {
    phys.validate();
    check_grids(u, front);
    if (!J.matches(front) || J.nodes() != u.nodes()) {
        throw InputError("flux field and temperature field use different grids", "flux");
    }
    const double rc = phys.rho * phys.c;
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k : detail::select_levels(front, opts)) {
        const std::size_t m = front.liquid_count(k);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            if (!mature(front, i + 1, k) || J.skipped(i - 1, k) || J.skipped(i + 1, k)) {
                continue;
            }
            const double storage = rc * time_derivative(u, front, phys.Tm, i, k);
            const double divergence = (J(i + 1, k) - J(i - 1, k)) / (2.0 * front.dx());
            worst = std::max(worst, std::abs(storage + divergence));
            scale = std::max({scale, std::abs(storage), std::abs(divergence)});
        }
    }
    return detail::normalized(worst, scale);
}

double governing_residual_caputo(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                                 const MemoryParams& mem, const ResidualOptions& opts) {
    phys.validate();
    mem.validate();
    check_grids(u, front);
    const double diffusion = mem.mu * phys.diffusivity();
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k : detail::select_levels(front, opts)) {
        const std::size_t m = front.liquid_count(k);
        for (std::size_t i = 1; i < m; ++i) {
            // The solver averages the source over the first two steps after melting.
            if (!front.liquid(i, k) || age(front, i, k) < 2.0 * front.dt() * (1.0 - 1e-9)) {
                continue;
            }
            const double caputo = detail::temperature_caputo(u, front, phys.Tm, mem.alpha, i, k);
            const double source = source_term(phys, mem, age(front, i, k));
            const double spread = diffusion * curvature(u, front, phys.Tm, i, k);
            worst = std::max(worst, std::abs(caputo + source - spread));
            scale = std::max({scale, std::abs(caputo), std::abs(source), std::abs(spread)});
        }
    }
    return detail::normalized(worst, scale);
}

double governing_residual_rl(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                             const MemoryParams& mem, const ResidualOptions& opts) {
    phys.validate();
    mem.validate();
    check_grids(u, front);
    const GradientField grad(u, front, phys.Tm);
    const double diffusion = mem.mu * phys.diffusivity();
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k : detail::select_levels(front, opts)) {
        const std::size_t m = front.liquid_count(k);
        std::vector<std::optional<double>> memory(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (mature(front, i, k)) {
                memory[i] = detail::gradient_memory(grad, front, mem, i, k);
            }
        }
        for (std::size_t i = 1; i + 1 < m; ++i) {
            if (!memory[i - 1] || !memory[i] || !memory[i + 1]) {
                continue;
            }
            const double rate = time_derivative(u, front, phys.Tm, i, k);
            const double spread = diffusion * (*memory[i + 1] - *memory[i - 1]) / (2.0 * front.dx());
            worst = std::max(worst, std::abs(rate - spread));
            scale = std::max({scale, std::abs(rate), std::abs(spread)});
        }
    }
    return detail::normalized(worst, scale);
}

std::vector<StefanSample> stefan_condition_residual(const TemperatureField& u, const FrontHistory& front,
                                                    const PhysicalParams& phys, const MemoryParams& mem,
                                                    const ResidualOptions& opts) {
    phys.validate();
    mem.validate();
    check_grids(u, front);
    const GradientField grad(u, front, phys.Tm);
    std::vector<StefanSample> series;
    for (std::size_t k : detail::select_levels(front, opts)) {
        const double v = front.velocity(k);
        if (v < 0.0) {
            throw MonotonicityError("front moves backwards", front.time(k));
        }
        const auto b = detail::last_mature(front, k);
        if (!b) {
            continue;
        }
        const auto fb = detail::gradient_memory(grad, front, mem, *b, k);
        const auto fa = *b > 0 ? detail::gradient_memory(grad, front, mem, *b - 1, k) : fb;
        if (!fb || !fa) {
            continue;
        }
        const double trace = detail::extrapolate_to_front(front, k, *b, *fa, *fb);
        const double latent = phys.rho * phys.l * v;
        const double gap = std::abs(latent + mem.mu * phys.k * trace);
        series.push_back({front.time(k), v, trace, latent > 0.0 ? gap / latent : gap});
    }
    return series;
}

double max_residual(const std::vector<StefanSample>& series) noexcept {
    double m = 0.0;
    for (const auto& s : series) {
        m = std::max(m, s.residual);
    }
    return m;
}

double first_moment(const TemperatureField& u, const FrontHistory& front, double Tm, std::size_t k) {
    const std::size_t m = front.liquid_count(k);
    const double s = front.position(k);
    if (m == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double xa = front.node(i);
        const double xb = front.node(i + 1);
        sum += 0.5 * (xb - xa) * (xa * u(i, k) + xb * u(i + 1, k));
    }
    const double xl = front.node(m - 1);
    sum += 0.5 * (s - xl) * (xl * u(m - 1, k) + s * Tm);
    return sum;
}

std::vector<IntegralRelationTerms> integral_relation_series(const TemperatureField& u, const FrontHistory& front,
                                                            const PhysicalParams& phys, const MemoryParams& mem,
                                                            double t_ref) {
    phys.validate();
    mem.validate();
    check_grids(u, front);
    const std::size_t r = level_of(front, t_ref, "t_ref");
    const double a = mem.alpha;
    const double d = phys.diffusivity();
    const double heat_rate = 2.0 * mem.mu * d * (phys.T0 - phys.Tm) / std::tgamma(a + 1.0);
    const double latent_coef = phys.l / phys.c - phys.Tm;
    const double sr = front.position(r);
    const double mr = first_moment(u, front, phys.Tm, r);
    const double tr = std::pow(front.time(r) - front.t0(), a);

    std::vector<IntegralRelationTerms> out;
    out.reserve(front.levels() - r);
    double trace_integral = 0.0;
    double previous_trace = caputo_trace(u, front, phys, mem, r);
    for (std::size_t k = r; k < front.levels(); ++k) {
        if (k > r) {
            const double trace = caputo_trace(u, front, phys, mem, k);
            trace_integral += 0.5 * front.dt() * (previous_trace + trace);
            previous_trace = trace;
        }
        const double s = front.position(k);
        IntegralRelationTerms terms;
        terms.t = front.time(k);
        terms.t_ref = front.time(r);
        terms.latent = latent_coef * (s * s - sr * sr);
        terms.heat_input = heat_rate * (std::pow(terms.t - front.t0(), a) - tr);
        terms.stored = 2.0 * (first_moment(u, front, phys.Tm, k) - mr);
        terms.trace = 2.0 * mem.mu * d * trace_integral;
        out.push_back(terms);
    }
    return out;
}

IntegralRelationTerms integral_relation(const TemperatureField& u, const FrontHistory& front,
                                        const PhysicalParams& phys, const MemoryParams& mem, double t, double t_ref) {
    const std::size_t k = level_of(front, t, "t");
    const std::size_t r = level_of(front, t_ref, "t_ref");
    if (k < r) {
        throw DomainError("t must not precede t_ref");
    }
    check_grids(u, front);
    // Truncated copy so the series stops at t.
    const std::vector<double> s(front.positions().begin(), front.positions().begin() + static_cast<long>(k) + 1);
    if (k == r) {
        IntegralRelationTerms terms;
        terms.t = t;
        terms.t_ref = t_ref;
        return terms;
    }
    std::vector<double> melt;
    const std::size_t reached = nodes_below(s.back(), front.dx());
    melt.assign(front.node_melt_times().begin(), front.node_melt_times().begin() + static_cast<long>(reached));
    const FrontHistory head(front.t0(), front.dt(), s, front.dx(), std::move(melt));
    const auto values = u.values();
    const TemperatureField uh(u.dx(), u.nodes(), u.t0(), u.dt(), k + 1,
                              std::vector<double>(values.begin(), values.begin() + static_cast<long>((k + 1) * u.nodes())));
    return integral_relation_series(uh, head, phys, mem, t_ref).back();
}

double integral_relation_residual(const TemperatureField& u, const FrontHistory& front, const PhysicalParams& phys,
                                  const MemoryParams& mem, double t) {
    return integral_relation(u, front, phys, mem, t, front.t0()).residual();
}

} // namespace memstefan::core
