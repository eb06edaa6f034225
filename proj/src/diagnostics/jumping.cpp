#include <algorithm>
#include <cmath>

#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/error.hpp"

namespace memstefan::diag {

AnalyticFront::AnalyticFront(bool linear, double rate, std::string name)
    : linear_(linear), rate_(rate), name_(std::move(name)) {
    if (!(rate > 0.0)) {
        throw InputError("front rate must be positive", "rate");
    }
}

AnalyticFront AnalyticFront::linear(double speed) { return {true, speed, "linear"}; }

AnalyticFront AnalyticFront::square_root(double sigma) { return {false, sigma, "square_root"}; }

double AnalyticFront::position(double t) const noexcept {
    return linear_ ? rate_ * t : rate_ * std::sqrt(t);
}

double AnalyticFront::melt_time(double x) const noexcept {
    return linear_ ? x / rate_ : x * x / (rate_ * rate_);
}

double AnalyticFront::melt_slope(double x) const noexcept {
    return linear_ ? 1.0 / rate_ : 2.0 * x / (rate_ * rate_);
}

double PowerFamily::value(double elapsed) const noexcept {
    double v = 0.0;
    for (const auto& term : terms) {
        v += term.coefficient * std::pow(elapsed, term.power);
    }
    return v;
}

double PowerFamily::slope(double elapsed) const noexcept {
    double v = 0.0;
    for (const auto& term : terms) {
        if (term.power > 0) {
            v += term.coefficient * term.power * std::pow(elapsed, term.power - 1);
        }
    }
    return v;
}

PowerFamily PowerFamily::quadratic() { return {{{1.0, 0}, {1.0, 1}, {1.0, 2}}}; }

std::vector<Grid> halving(Grid base, std::size_t levels) {
    std::vector<Grid> out;
    for (std::size_t i = 0; i < levels; ++i) {
        out.push_back(base);
        base.dx /= 2.0;
        base.dt /= 2.0;
    }
    return out;
}

namespace {

enum class Which { Integral, Derivative };

// History of g(tau) on [h, t], resampled the same way as solver node
// histories.
template <class G>
frac::SampledFunction history(double h, double t, double dt, G&& g) {
    const auto intervals = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil((t - h) / dt - 1e-9)));
    const double step = (t - h) / static_cast<double>(intervals);
    return frac::SampledFunction::sample(h, step, intervals + 1, g);
}

// I^{1-a} or RL D^{1-a} over [h(x), t] at t, applied to w or to w_x.
double node_operator(Which which, bool gradient, const PowerFamily& w, const AnalyticFront& front, double alpha,
                     double x, double t, double dt) {
    const double h = front.melt_time(x);
    const double hp = front.melt_slope(x);
    const auto f = history(h, t, dt, [&](double tau) {
        const double e = tau - h;
        return gradient ? -hp * w.slope(e) : w.value(e);
    });
    const frac::FracOrder order(1.0 - alpha);
    if (which == Which::Integral) {
        return frac::rl_integral_at(f, order, f.last());
    }
    return frac::rl_derivative_at_end(f, order);
}

CheckReport jumping_check(Which which, const PowerFamily& w, const AnalyticFront& front, const JumpingSetup& setup,
                          Tolerance tol) {
    if (!(setup.alpha > 0.0 && setup.alpha < 1.0)) {
        throw InputError("jumping formulas need 0 < alpha < 1", "alpha");
    }
    const double a = setup.alpha;
    const double t = setup.t;
    const double p0 = w.value(0.0);
    CheckReport r;
    if (which == Which::Integral) {
        r.name = "jumping_integral/" + front.name();
        r.statement = "I[w_x] - d/dx I[w] = w(x,h)(t-h)^-a h'(x)/Gamma(1-a)";
    } else {
        r.name = "jumping_derivative/" + front.name();
        r.statement = "d/dx RL D[w] - RL D[w_x] = (1-a) w(x,h) h'(x)(t-h)^(a-2)/Gamma(a)";
    }
    for (const Grid& g : setup.grids) {
        double worst = 0.0;
        double scale = 0.0;
        std::size_t used = 0;
        const double limit = 0.75 * front.position(t);
        for (std::size_t i = 1;; ++i) {
            const double x = static_cast<double>(i) * g.dx;
            if (x + g.dx > limit) {
                break;
            }
            const double right = node_operator(which, false, w, front, a, x + g.dx, t, g.dt);
            const double left = node_operator(which, false, w, front, a, x - g.dx, t, g.dt);
            const double dx_term = (right - left) / (2.0 * g.dx);
            const double grad_term = node_operator(which, true, w, front, a, x, t, g.dt);
            const double e = t - front.melt_time(x);
            const double hp = front.melt_slope(x);
            double lhs = 0.0;
            double rhs = 0.0;
            if (which == Which::Integral) {
                lhs = grad_term - dx_term;
                rhs = p0 * std::pow(e, -a) * hp / std::tgamma(1.0 - a);
            } else {
                lhs = dx_term - grad_term;
                rhs = (1.0 - a) * p0 * hp * std::pow(e, a - 2.0) / std::tgamma(a);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
            scale = std::max({scale, std::abs(dx_term), std::abs(grad_term), std::abs(rhs)});
            ++used;
        }
        if (used == 0) {
            throw InputError("grid too coarse for the jumping check: no node below 3 s(t) / 4", "dx");
        }
        LevelResult lv;
        lv.dx = g.dx;
        lv.dt = g.dt;
        lv.residual = worst / scale;
        lv.tolerance = tol(g.dx, g.dt);
        lv.details.emplace_back("nodes", static_cast<double>(used));
        r.levels.push_back(std::move(lv));
    }
    finalize(r);
    return r;
}

} // namespace

CheckReport jumping_formula_check_1(const PowerFamily& w, const AnalyticFront& front, const JumpingSetup& setup,
                                    Tolerance tol) {
    return jumping_check(Which::Integral, w, front, setup, tol);
}

CheckReport jumping_formula_check_2(const PowerFamily& w, const AnalyticFront& front, const JumpingSetup& setup,
                                    Tolerance tol) {
    return jumping_check(Which::Derivative, w, front, setup, tol);
}

std::vector<CheckReport> jumping_suite(Tolerance tol) {
    JumpingSetup setup;
    setup.alpha = 0.5;
    setup.t = 1.0;
    setup.grids = halving({0.02, 0.01}, 3);
    const auto w = PowerFamily::quadratic();
    std::vector<CheckReport> out;
    for (const auto& front : {AnalyticFront::linear(1.0), AnalyticFront::square_root(1.0)}) {
        out.push_back(jumping_formula_check_1(w, front, setup, tol));
        out.push_back(jumping_formula_check_2(w, front, setup, tol));
    }
    return out;
}

} // namespace memstefan::diag
