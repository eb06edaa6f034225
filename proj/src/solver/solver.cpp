#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "memstefan/core/history.hpp"
#include "memstefan/core/neumann.hpp"
#include "memstefan/core/residuals.hpp"
#include "memstefan/error.hpp"
#include "memstefan/fraccalc.hpp"
#include "memstefan/solver/solver.hpp"

namespace memstefan::solver {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string at_time(const std::string& what, double t) {
    std::ostringstream os;
    os.precision(10);
    os << what << " at t = " << t;
    return os.str();
}

std::size_t first_level_after(double h, double dt) {
    return static_cast<std::size_t>(std::floor(h / dt + kSlack)) + 1;
}

// D = coef * v_N + rest for an L1 sum of order beta at level N over the
// history (h, v_h), (t_j, value(j)) for j0 <= j < N, then (t_N, v_N).
struct Linear {
    double coef;
    double rest;
};

template <class Value>
Linear l1_sum(const SolverState& st, double h, double v_h, std::size_t N, double beta, Value value) {
    const double t = st.time(N);
    const std::size_t j0 = first_level_after(h, st.dt);
    if (j0 >= N) {
        const double span = t - h;
        const double c = beta == 1.0 ? 1.0 / span : std::pow(span, -beta) / std::tgamma(2.0 - beta);
        return {c, -c * v_h};
    }
    if (beta == 1.0) {
        return {1.0 / st.dt, -value(N - 1) / st.dt};
    }
    const double p = 1.0 - beta;
    const double g = std::tgamma(2.0 - beta);
    const auto weights = frac::WeightCache::instance().get(beta, N + 1);
    const auto& l1 = weights->l1;
    const double scale = std::pow(st.dt, -beta) / g;

    const double first_span = st.time(j0) - h;
    const double tail = t - st.time(j0);
    const double w1 = std::pow(tail, p) * std::expm1(p * std::log1p(first_span / tail));
    double rest = (value(j0) - v_h) / first_span * w1 / g;
    for (std::size_t j = j0 + 1; j < N; ++j) {
        rest += scale * l1[N - j] * (value(j) - value(j - 1));
    }
    const double coef = scale * l1[0];
    rest -= coef * value(N - 1);
    return {coef, rest};
}

double stored(const std::vector<std::vector<double>>& levels, std::size_t j, std::size_t i, double fallback) {
    return i < levels[j].size() ? levels[j][i] : fallback;
}

double front_slope_at(const SolverState& st, double h) {
    const std::size_t last = st.front_slopes.size() - 1;
    const double r = std::clamp(h / st.dt, 0.0, static_cast<double>(last));
    const auto k = std::min(static_cast<std::size_t>(std::floor(r)), last);
    const std::size_t k1 = std::min(k + 1, last);
    const double w = r - static_cast<double>(k);
    const double lo = st.front_slopes[k];
    const double hi = st.front_slopes[k1];
    if (!std::isnan(lo) && !std::isnan(hi)) {
        return lo + w * (hi - lo);
    }
    if (!std::isnan(lo)) {
        return lo;
    }
    for (std::size_t j = k1; j <= last; ++j) {
        if (!std::isnan(st.front_slopes[j])) {
            return st.front_slopes[j];
        }
    }
    return 0.0;
}

// Level N as seen by the front functionals: committed, or a candidate.
struct LevelView {
    std::size_t N;
    double front;
    const std::vector<double>& values;
    const std::vector<double>& new_melt_times;
};

double melt_time_of(const SolverState& st, const LevelView& v, std::size_t i) {
    return i < st.melt_times.size() ? st.melt_times[i] : v.new_melt_times[i - st.melt_times.size()];
}

double extrapolate(const SolverState& st, const LevelView& v, std::size_t b, double va, double vb) {
    if (b == 0) {
        return vb;
    }
    return vb + (v.front - st.x(b)) * (vb - va) / st.dx;
}

std::ptrdiff_t last_mature(const SolverState& st, const LevelView& v) {
    const double t = st.time(v.N);
    for (std::size_t i = v.values.size(); i-- > 0;) {
        if (t - melt_time_of(st, v, i) >= st.dt * (1.0 - kSlack)) {
            return static_cast<std::ptrdiff_t>(i);
        }
    }
    return -1;
}

double trace_of(const SolverState& st, const LevelView& v) {
    const std::ptrdiff_t b = last_mature(st, v);
    if (b < 0) {
        return 0.0;
    }
    const double Tm = st.phys.Tm;
    auto at = [&](std::size_t i) {
        if (st.mem.classical()) {
            return v.values[i] - Tm;
        }
        const Linear d = l1_sum(st, melt_time_of(st, v, i), Tm, v.N, 1.0 - st.mem.alpha,
                                [&](std::size_t j) { return stored(st.values, j, i, Tm); });
        return d.coef * v.values[i] + d.rest;
    };
    const auto ub = static_cast<std::size_t>(b);
    const double vb = at(ub);
    const double va = ub > 0 ? at(ub - 1) : vb;
    return extrapolate(st, v, ub, va, vb);
}

// Memory sums of every node already liquid at level n, for the solve at n+1.
std::vector<Linear> prepare(const SolverState& st) {
    const std::size_t N = st.level() + 1;
    const double Tm = st.phys.Tm;
    std::vector<Linear> memory(st.melt_times.size(), Linear{0.0, 0.0});
    for (std::size_t i = 1; i < memory.size(); ++i) {
        memory[i] = l1_sum(st, st.melt_times[i], Tm, N, st.mem.alpha,
                           [&](std::size_t j) { return stored(st.values, j, i, Tm); });
    }
    return memory;
}

double averaged_source(const SolverState& st, double t, double h) {
    const double a = st.mem.alpha;
    if (st.mem.classical()) {
        return 0.0;
    }
    const double l = st.phys.l;
    const double elapsed = t - h;
    const double before = t - st.dt - h;
    if (before < st.dt) {
        const double lo = std::max(before, 0.0);
        return l * (std::pow(elapsed, 1.0 - a) - std::pow(lo, 1.0 - a)) / (std::tgamma(2.0 - a) * st.dt);
    }
    return l * std::pow(elapsed, -a) / std::tgamma(1.0 - a);
}

StepField solve_field(const SolverState& st, const std::vector<Linear>& memory, double s_next,
                      std::vector<double> new_melt_times) {
    const std::size_t N = st.level() + 1;
    const double t = st.time(N);
    const double Tm = st.phys.Tm;
    const double T0 = st.phys.T0;
    const double mu = st.mem.mu;
    const double dx = st.dx;
    const std::size_t existing = st.melt_times.size();
    const std::size_t m = existing + new_melt_times.size();
    if (m < 2) {
        throw StabilityError(at_time("the liquid region holds fewer than two nodes", t), t);
    }
    const std::size_t unknowns = m - 1;
    std::vector<double> lower(unknowns, 0.0);
    std::vector<double> diag(unknowns, 0.0);
    std::vector<double> upper(unknowns, 0.0);
    std::vector<double> rhs(unknowns, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const std::size_t r = i - 1;
        const double h = i < existing ? st.melt_times[i] : new_melt_times[i - existing];
        const Linear mem = i < existing ? memory[i]
                                        : l1_sum(st, h, Tm, N, st.mem.alpha, [&](std::size_t) { return Tm; });
        double lo;
        double di;
        double up = 0.0;
        double boundary = 0.0;
        if (i + 1 < m) {
            lo = mu / (dx * dx);
            up = lo;
            di = 2.0 * lo;
        } else {
            const double eta = s_next - st.x(i);
            lo = 2.0 * mu / (dx * (eta + dx));
            di = 2.0 * mu / (eta * dx);
            boundary = 2.0 * mu * Tm / (eta * (eta + dx));
        }
        diag[r] = mem.coef + di;
        rhs[r] = boundary - mem.rest - averaged_source(st, t, h);
        if (i == 1) {
            rhs[r] += lo * T0;
        } else {
            lower[r] = -lo;
        }
        upper[r] = -up;
    }
    // Thomas algorithm.
    for (std::size_t r = 0; r < unknowns; ++r) {
        if (r > 0) {
            const double w = lower[r] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        if (!(diag[r] > 0.0) || !std::isfinite(diag[r])) {
            std::ostringstream os;
            os << "tridiagonal solve broke down (pivot " << diag[r] << "); retry with dt <= " << st.dt / 2;
            throw StabilityError(at_time(os.str(), t), t);
        }
    }
    std::vector<double> values(m);
    values[0] = T0;
    for (std::size_t r = unknowns; r-- > 0;) {
        const double next = r + 1 < unknowns ? values[r + 2] : 0.0;
        values[r + 1] = (rhs[r] - upper[r] * next) / diag[r];
    }
    return {s_next, std::move(new_melt_times), std::move(values)};
}

// Integral relation residual at level N for front s with the field held fixed.
struct Relation {
    double latent_coef;
    double s_ref;
    double heat;
    double moment_ref;
    double trace_term;
    double Tm;
    double dx;
    const std::vector<double>& values;

    double moment(double s) const {
        std::size_t q = std::min(values.size(), core::nodes_below(s, dx));
        q = std::max<std::size_t>(q, 1);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            const double xa = static_cast<double>(i) * dx;
            const double xb = xa + dx;
            sum += 0.5 * dx * (xa * values[i] + xb * values[i + 1]);
        }
        const double xl = static_cast<double>(q - 1) * dx;
        return sum + 0.5 * (s - xl) * (xl * values[q - 1] + s * Tm);
    }
    double operator()(double s) const {
        return latent_coef * (s * s - s_ref * s_ref) - heat + 2.0 * (moment(s) - moment_ref) + trace_term;
    }
    double slope(double s) const {
        std::size_t q = std::max<std::size_t>(std::min(values.size(), core::nodes_below(s, dx)), 1);
        const double xl = static_cast<double>(q - 1) * dx;
        return 2.0 * latent_coef * s + xl * values[q - 1] + 2.0 * s * Tm - xl * Tm;
    }
};

double solve_relation(const Relation& rel, double s_lo, double guess, const SolverConfig& cfg, double t,
                      long& iterations) {
    const double f_lo = rel(s_lo);
    if (f_lo >= 0.0) {
        throw MonotonicityError(at_time("the integral relation admits no advancing front", t), t);
    }
    double lo = s_lo;
    double hi = std::max(guess, s_lo + 1e-12 * std::max(1.0, s_lo));
    for (int expand = 0; rel(hi) <= 0.0; ++expand) {
        lo = hi;
        hi = s_lo + 2.0 * (hi - s_lo);
        if (expand > 200) {
            throw FrontSolveError(at_time("could not bracket the front position", t), t);
        }
    }
    double s = std::clamp(guess, lo, hi);
    for (int it = 1; it <= cfg.max_newton_iters; ++it) {
        ++iterations;
        const double f = rel(s);
        if (f == 0.0) {
            return s;
        }
        (f < 0.0 ? lo : hi) = s;
        const double d = rel.slope(s);
        double next = s - f / d;
        if (!(d > 0.0) || !(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - s);
        s = next;
        if (step <= cfg.newton_tol * std::max(s, 1e-300) || hi - lo <= cfg.newton_tol * s) {
            return s;
        }
    }
    throw FrontSolveError(at_time("front Newton solve did not converge", t), t);
}

} // namespace

double first_moment(const std::vector<double>& values, double dx, double s, double Tm) {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double xa = static_cast<double>(i) * dx;
        sum += 0.5 * dx * (xa * values[i] + (xa + dx) * values[i + 1]);
    }
    const double xl = static_cast<double>(values.size() - 1) * dx;
    return sum + 0.5 * (s - xl) * (xl * values.back() + s * Tm);
}

void SolverState::commit(const StepField& step) {
    positions.push_back(step.front);
    melt_times.insert(melt_times.end(), step.new_melt_times.begin(), step.new_melt_times.end());
    values.push_back(step.values);
    std::vector<double> g(step.values.size(), 0.0);
    double front_slope = kNaN;
    if (!step.values.empty()) {
        front_slope = core::level_slopes(step.values, dx, step.front, phys.Tm, g);
    }
    slopes.push_back(std::move(g));
    front_slopes.push_back(front_slope);
    const std::size_t n = level();
    static const std::vector<double> none;
    traces.push_back(trace_of(*this, LevelView{n, step.front, values.back(), none}));
    double integral = 0.0;
    if (n > seed_level) {
        integral = trace_integrals.back() + 0.5 * dt * (traces[n - 1] + traces[n]);
    }
    trace_integrals.push_back(integral);
}

double front_trace(const SolverState& state, std::size_t n) {
    return state.traces.at(n);
}

double front_memory_flux(const SolverState& st, std::size_t n) {
    static const std::vector<double> none;
    const LevelView v{n, st.positions.at(n), st.slopes.at(n), none};
    // Committed level: every liquid node has a melt time.
    const std::ptrdiff_t b = last_mature(st, v);
    if (b < 0) {
        throw FrontSolveError(at_time("no liquid node is old enough to evaluate the front flux", st.time(n)),
                              st.time(n));
    }
    const double a = st.mem.alpha;
    const double t = st.time(n);
    auto at = [&](std::size_t i) {
        if (st.mem.classical()) {
            return st.slopes[n][i];
        }
        const double h = st.melt_times[i];
        const double g0 = front_slope_at(st, h);
        const Linear d = l1_sum(st, h, g0, n, 1.0 - a, [&](std::size_t j) { return stored(st.slopes, j, i, 0.0); });
        return g0 * std::pow(t - h, a - 1.0) / std::tgamma(a) + d.coef * st.slopes[n][i] + d.rest;
    };
    const auto ub = static_cast<std::size_t>(b);
    const double vb = at(ub);
    const double va = ub > 0 ? at(ub - 1) : vb;
    return extrapolate(st, v, ub, va, vb);
}

double effective_step(const core::PhysicalParams& phys, const SolverConfig& cfg, bool* capped) {
    const double lambda = core::neumann_lambda(phys.stefan_number());
    const double speed = lambda * std::sqrt(phys.diffusivity() / cfg.t_seed);
    const double cap = cfg.dx / speed;
    const double dt = std::min(cfg.dt, cap);
    if (capped != nullptr) {
        *capped = cfg.dt > cap;
    }
    const double steps = std::max(1.0, std::ceil(cfg.t_end / dt - kSlack));
    return cfg.t_end / steps;
}

SolverState seed_solution(const core::PhysicalParams& phys, const core::MemoryParams& mem, const SolverConfig& cfg) {
    phys.validate();
    mem.validate();
    cfg.validate();
    SolverState st;
    st.phys = core::nondimensional(phys);
    st.mem = mem;
    st.dt = effective_step(phys, cfg);
    st.dx = cfg.dx / std::sqrt(phys.diffusivity());
    const double lambda = core::neumann_lambda(st.phys.stefan_number());
    st.seed_level = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.t_seed / st.dt)));
    const double s_seed = 2.0 * lambda * std::sqrt(st.time(st.seed_level));
    if (!(s_seed > st.dx)) {
        std::ostringstream os;
        os << "seed front s(t_seed) = " << s_seed * std::sqrt(phys.diffusivity()) << " does not exceed dx = " << cfg.dx
           << "; use a smaller dx or a larger t_seed";
        throw StepSizeError(os.str(), cfg.t_seed);
    }
    st.positions = {0.0};
    st.values = {{}};
    st.slopes = {{}};
    st.front_slopes = {kNaN};
    st.traces = {0.0};
    st.trace_integrals = {0.0};
    const double T0 = st.phys.T0;
    const double Tm = st.phys.Tm;
    const double erf_lambda = std::erf(lambda);
    for (std::size_t k = 1; k <= st.seed_level; ++k) {
        const double t = st.time(k);
        StepField step;
        step.front = 2.0 * lambda * std::sqrt(t);
        const std::size_t m = core::nodes_below(step.front, st.dx);
        for (std::size_t i = st.melt_times.size(); i < m; ++i) {
            const double x = st.x(i);
            step.new_melt_times.push_back(std::min(x * x / (4.0 * lambda * lambda), t));
        }
        step.values.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            step.values[i] = i == 0 ? T0 : T0 - (T0 - Tm) * std::erf(st.x(i) / (2.0 * std::sqrt(t))) / erf_lambda;
        }
        st.commit(step);
    }
    return st;
}

std::vector<double> mint_node(const SolverState& st, double s_next) {
    const std::size_t n = st.level();
    const double s_n = st.positions[n];
    const double t_n = st.time(n);
    if (!(s_next > s_n)) {
        throw MonotonicityError(at_time("front proposal does not advance", st.time(n + 1)), st.time(n + 1));
    }
    std::vector<double> h;
    for (std::size_t i = st.melt_times.size(); st.x(i) < s_next; ++i) {
        const double frac = (st.x(i) - s_n) / (s_next - s_n);
        h.push_back(t_n + std::clamp(frac, 0.0, 1.0) * st.dt);
    }
    return h;
}

StepField advance_step(const SolverState& state, double s_next) {
    return solve_field(state, prepare(state), s_next, mint_node(state, s_next));
}

StepField update_front(const SolverState& st, const SolverConfig& cfg, long* newton_iterations,
                       int* coupling_iterations) {
    const std::size_t n = st.level();
    const std::size_t N = n + 1;
    const double t = st.time(N);
    const double s_n = st.positions[n];
    const std::vector<Linear> memory = prepare(st);
    long newton = 0;
    int coupling = 0;

    if (cfg.front_update == FrontUpdate::PointwiseStefan) {
        const double flux = front_memory_flux(st, n);
        const double s_next = s_n - st.dt * st.mem.mu * flux / st.phys.l;
        StepField step = solve_field(st, memory, s_next, mint_node(st, s_next));
        if (coupling_iterations != nullptr) {
            *coupling_iterations = 1;
        }
        return step;
    }

    const double a = st.mem.alpha;
    const std::size_t r = st.seed_level;
    const double t_ref = st.time(r);
    const double heat = 2.0 * st.mem.mu * (st.phys.T0 - st.phys.Tm) * (std::pow(t, a) - std::pow(t_ref, a)) /
                        std::tgamma(a + 1.0);
    const double moment_ref = first_moment(st.values[r], st.dx, st.positions[r], st.phys.Tm);
    const double previous = n > 0 ? st.positions[n - 1] : 0.0;
    double guess = s_n + std::max(s_n - previous, 1e-6 * st.dx);

    // Front proposed by the integral relation when the field is solved for s.
    auto propose = [&](double s) {
        StepField field = solve_field(st, memory, s, mint_node(st, s));
        const double trace = trace_of(st, LevelView{N, s, field.values, field.new_melt_times});
        const double trace_integral = st.trace_integrals[n] + 0.5 * st.dt * (st.traces[n] + trace);
        const Relation rel{st.phys.l - st.phys.Tm, st.positions[r], heat, moment_ref,
                           2.0 * st.mem.mu * trace_integral, st.phys.Tm, st.dx, field.values};
        return solve_relation(rel, s_n, s, cfg, t, newton);
    };
    auto finish = [&](double s) {
        if (newton_iterations != nullptr) {
            *newton_iterations += newton;
        }
        if (coupling_iterations != nullptr) {
            *coupling_iterations = coupling;
        }
        return solve_field(st, memory, s, mint_node(st, s));
    };
    // Root of g(s) = propose(s) - s by secant steps on the two latest
    // iterates, falling back to bisection once a sign change brackets it.
    double s0 = guess;
    double g0 = propose(s0) - s0;
    coupling = 1;
    if (std::abs(g0) <= cfg.newton_tol * s0) {
        return finish(s0 + g0);
    }
    double lo = g0 > 0.0 ? s0 : -1.0;
    double hi = g0 < 0.0 ? s0 : -1.0;
    double s1 = s0 + g0;
    for (coupling = 2; coupling <= cfg.max_newton_iters; ++coupling) {
        const double g1 = propose(s1) - s1;
        if (std::abs(g1) <= cfg.newton_tol * s1) {
            return finish(s1 + g1);
        }
        (g1 > 0.0 ? lo : hi) = s1;
        double next = g1 != g0 ? s1 - g1 * (s1 - s0) / (g1 - g0) : s1 + g1;
        if (lo > 0.0 && hi > 0.0) {
            if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) {
                next = 0.5 * (lo + hi);
            }
            if (std::abs(hi - lo) <= cfg.newton_tol * next) {
                return finish(next);
            }
        } else if (!(next > s_n) || !std::isfinite(next)) {
            next = s1 + 0.5 * g1;
        }
        s0 = s1;
        g0 = g1;
        s1 = next;
    }
    throw FrontSolveError(at_time("front and field did not settle within max_newton_iters coupling iterations", t), t);
}

bool SolveResult::max_principle_ok() const noexcept {
    return stats.max_principle_violation <= 1e-8 * (phys.T0 - phys.Tm);
}

SolveResult run(const core::PhysicalParams& phys, const core::MemoryParams& mem, const SolverConfig& cfg) {
    SolverState st = seed_solution(phys, mem, cfg);
    RunStats stats;
    stats.seed_level = st.seed_level;
    stats.dt = effective_step(phys, cfg, &stats.dt_capped);
    if (stats.dt_capped) {
        std::ostringstream os;
        os << "dt reduced to " << stats.dt << " so the front crosses at most one node per step at t_seed";
        stats.warnings.push_back(os.str());
    }
    const auto last = static_cast<std::size_t>(std::llround(cfg.t_end / st.dt));
    const double T0 = st.phys.T0;
    const double Tm = st.phys.Tm;
    while (st.level() < last) {
        int coupling = 0;
        StepField step = update_front(st, cfg, &stats.newton_iterations, &coupling);
        stats.max_coupling_iterations = std::max(stats.max_coupling_iterations, coupling);
        if (step.new_melt_times.size() > 1) {
            if (stats.multi_crossing_steps == 0) {
                std::ostringstream os;
                os << "front crossed " << step.new_melt_times.size() << " nodes in one step at t = "
                   << st.time(st.level() + 1);
                stats.warnings.push_back(os.str());
            }
            ++stats.multi_crossing_steps;
        }
        for (double v : step.values) {
            const double over = std::max({Tm - v, v - T0, 0.0});
            if (over > stats.max_principle_violation) {
                stats.max_principle_violation = over;
                stats.max_principle_time = st.time(st.level() + 1);
            }
        }
        st.commit(step);
        ++stats.steps;
    }
    if (stats.max_principle_violation > 1e-8 * (T0 - Tm)) {
        std::ostringstream os;
        os << "maximum principle violated by " << stats.max_principle_violation << " at t = "
           << stats.max_principle_time;
        stats.warnings.push_back(os.str());
    }

    // Back to dimensional lengths.
    const double length = std::sqrt(phys.diffusivity());
    std::vector<double> positions(st.positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        positions[k] = st.positions[k] * length;
    }
    const std::size_t reached = core::nodes_below(positions.back(), cfg.dx);
    std::vector<double> melt(reached, st.time(st.level()));
    std::copy_n(st.melt_times.begin(), std::min(reached, st.melt_times.size()), melt.begin());
    core::FrontHistory front(0.0, st.dt, std::move(positions), cfg.dx, std::move(melt));
    const std::size_t nodes = reached + 1;
    std::vector<double> u(nodes * front.levels(), phys.Tm);
    for (std::size_t k = 0; k < front.levels(); ++k) {
        const std::size_t m = std::min(front.liquid_count(k), st.values[k].size());
        std::copy_n(st.values[k].begin(), m, u.begin() + static_cast<long>(k * nodes));
    }
    core::TemperatureField field(cfg.dx, nodes, 0.0, st.dt, front.levels(), std::move(u));

    SolveResult result{phys, mem, cfg, std::move(front), std::move(field), std::move(stats), {}};
    if (cfg.checkpoints > 0 && last > st.seed_level) {
        const core::FluxField J = core::memory_flux(result.field, result.front, phys, mem);
        const std::size_t span = last - st.seed_level;
        const auto count = static_cast<std::size_t>(cfg.checkpoints);
        std::size_t previous = st.seed_level;
        for (std::size_t c = 1; c <= count; ++c) {
            const std::size_t k = st.seed_level + (span * c + count - 1) / count;
            if (k == previous) {
                continue;
            }
            previous = k;
            core::ResidualOptions opts;
            opts.levels = {k};
            CheckpointResiduals row;
            row.t = result.front.time(k);
            row.level = k;
            row.implicit_flux = core::implicit_flux_residual(J, result.field, result.front, phys, mem, opts);
            row.continuity = core::continuity_residual(result.field, J, result.front, phys, opts);
            row.governing_caputo = core::governing_residual_caputo(result.field, result.front, phys, mem, opts);
            row.governing_rl = core::governing_residual_rl(result.field, result.front, phys, mem, opts);
            const auto stefan = core::stefan_condition_residual(result.field, result.front, phys, mem, opts);
            row.stefan_condition = stefan.empty() ? kNaN : stefan.front().residual;
            row.integral_relation =
                core::integral_relation(result.field, result.front, phys, mem, row.t, result.seed_time()).relative();
            result.residuals.push_back(row);
        }
    }
    return result;
}

} // namespace memstefan::solver
