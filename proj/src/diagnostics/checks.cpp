#include <algorithm>
#include <cmath>
#include <cstdio>

#include "memstefan/core/history.hpp"
#include "memstefan/core/neumann.hpp"
#include "memstefan/core/residuals.hpp"
#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/error.hpp"

namespace memstefan::diag {

namespace {

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

double window_start(const solver::SolveResult& run) { return 2.0 * run.seed_time(); }

bool in_window(const solver::SolveResult& run, std::size_t k) {
    return run.front.time(k) >= window_start(run) * (1.0 - 1e-12);
}

// Eight levels evenly spread over [2 t_seed, t_end], rounded to the grid.
std::vector<std::size_t> sample_levels(const solver::SolveResult& run) {
    const auto& f = run.front;
    const double a = window_start(run);
    const double b = f.end_time();
    std::vector<std::size_t> out;
    for (int j = 0; j < 8; ++j) {
        const double t = a + (b - a) * j / 7.0;
        const auto k = static_cast<std::size_t>(std::llround((t - f.t0()) / f.dt()));
        const std::size_t level = std::min(k, f.levels() - 1);
        if (out.empty() || out.back() != level) {
            out.push_back(level);
        }
    }
    return out;
}

double stefan_max(const solver::SolveResult& run) {
    core::ResidualOptions opts;
    opts.from_time = window_start(run);
    return core::max_residual(core::stefan_condition_residual(run.field, run.front, run.phys, run.mem, opts));
}

double relation_max(const solver::SolveResult& run, double t_ref) {
    double worst = 0.0;
    for (const auto& terms : core::integral_relation_series(run.field, run.front, run.phys, run.mem, t_ref)) {
        if (terms.t >= window_start(run) * (1.0 - 1e-12)) {
            worst = std::max(worst, std::abs(terms.relative()));
        }
    }
    return worst;
}

// I^beta at t of the piecewise-linear function through (times, values),
// integrated exactly segment by segment. Repeated times encode jumps.
double piecewise_linear_integral(std::span<const double> times, std::span<const double> values, double beta,
                                 double t) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        const double A = t - times[j];
        const double B = t - times[j + 1];
        if (A <= B) {
            continue;
        }
        const double pa = std::pow(A, beta);
        const double pb = std::pow(B, beta);
        const double slope = (values[j + 1] - values[j]) / (A - B);
        acc += values[j] * (pa - pb) / beta + slope * (A * (pa - pb) / beta - (A * pa - B * pb) / (beta + 1.0));
    }
    return acc / std::tgamma(beta);
}

double front_relative_error(const solver::SolveResult& run) {
    const core::NeumannSolution exact(run.phys);
    double worst = 0.0;
    for (std::size_t k = 0; k < run.front.levels(); ++k) {
        if (in_window(run, k)) {
            const double s = run.front.position(k);
            worst = std::max(worst, std::abs(s - exact.front(run.front.time(k))) / s);
        }
    }
    return worst;
}

} // namespace

Grid grid_of(const solver::SolveResult& run) noexcept { return {run.front.dx(), run.front.dt()}; }

CheckReport formulation_equivalence_check(std::span<const solver::SolveResult> runs, Tolerance tol) {
    CheckReport r;
    r.name = "formulation_equivalence";
    r.statement = "Caputo-with-source and RL governing residuals both below tol(grid) with ratio in [1/10, 10]";
    if (!runs.empty()) {
        r.name += "/alpha=" + format("%g", runs.front().mem.alpha);
    }
    bool ok = !runs.empty();
    std::vector<double> worst;
    for (const auto& run : runs) {
        core::ResidualOptions opts;
        opts.levels = sample_levels(run);
        const double cap = core::governing_residual_caputo(run.field, run.front, run.phys, run.mem, opts);
        const double rl = core::governing_residual_rl(run.field, run.front, run.phys, run.mem, opts);
        const Grid g = grid_of(run);
        LevelResult lv;
        lv.dx = g.dx;
        lv.dt = g.dt;
        lv.residual = std::max(cap, rl);
        lv.tolerance = tol(g.dx, g.dt);
        const double ratio = rl > 0.0 ? cap / rl : (cap > 0.0 ? INFINITY : 1.0);
        lv.passed = cap < lv.tolerance && rl < lv.tolerance && ratio >= 0.1 && ratio <= 10.0;
        lv.details = {{"caputo", cap}, {"rl", rl}, {"ratio", ratio}};
        ok = ok && lv.passed;
        worst.push_back(lv.residual);
        r.levels.push_back(std::move(lv));
    }
    r.order = observed_order(worst);
    r.passed = ok;
    if (!ok) {
        r.note = "a residual exceeds tol(grid) or the ratio leaves [1/10, 10]";
    }
    return r;
}

CheckReport theorem_crosscheck(std::span<const solver::SolveResult> runs, Tolerance tol) {
    CheckReport r;
    if (runs.empty()) {
        r.name = "crosscheck";
        return r;
    }
    const auto& first = runs.front();
    const bool integral = first.config.front_update == solver::FrontUpdate::IntegralRelation;
    r.name = std::string(integral ? "stefan_on_integral_run" : "relation_on_pointwise_run") + "/alpha=" +
             format("%g", first.mem.alpha);
    r.statement = integral ? "integral-relation run satisfies the pointwise fractional Stefan condition"
                           : "pointwise Stefan run satisfies the integral relation";
    for (const auto& run : runs) {
        const Grid g = grid_of(run);
        LevelResult lv;
        lv.dx = g.dx;
        lv.dt = g.dt;
        lv.residual = integral ? stefan_max(run) : relation_max(run, run.seed_time());
        lv.tolerance = tol(g.dx, g.dt);
        r.levels.push_back(std::move(lv));
    }
    finalize(r);
    return r;
}

double front_gap(const solver::SolveResult& a, const solver::SolveResult& b) {
    const Grid ga = grid_of(a);
    const Grid gb = grid_of(b);
    if (std::abs(ga.dx - gb.dx) > 1e-12 * ga.dx || std::abs(ga.dt - gb.dt) > 1e-12 * ga.dt) {
        throw InputError("front_gap needs runs on the same grid");
    }
    const std::size_t levels = std::min(a.front.levels(), b.front.levels());
    double gap = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
        if (in_window(a, k)) {
            gap = std::max(gap, std::abs(a.front.position(k) - b.front.position(k)));
            scale = std::max(scale, std::abs(a.front.position(k)));
        }
    }
    return scale > 0.0 ? gap / scale : gap;
}

double distance_to_classical(const solver::SolveResult& run) {
    const core::NeumannSolution exact(run.phys);
    double d = 0.0;
    for (std::size_t k = 0; k < run.front.levels(); ++k) {
        if (in_window(run, k)) {
            d = std::max(d, std::abs(run.front.position(k) - exact.front(run.front.time(k))));
        }
    }
    return d;
}

CheckReport alpha_limit_study(const core::PhysicalParams& phys, const solver::SolverConfig& cfg,
                              std::span<const double> alphas) {
    CheckReport r;
    r.name = "alpha_limit";
    r.statement = "sup distance of the front from the classical similarity front decreases as alpha -> 1";
    double previous = INFINITY;
    bool ok = alphas.size() >= 2;
    for (double alpha : alphas) {
        LevelResult lv;
        lv.dx = cfg.dx;
        lv.dt = cfg.dt;
        lv.details.emplace_back("alpha", alpha);
        try {
            const auto run = solver::run(phys, core::MemoryParams{alpha, 1.0}, cfg);
            lv.dt = run.front.dt();
            lv.residual = distance_to_classical(run);
        } catch (const SolverError& e) {
            r.note = "run at alpha=" + format("%g", alpha) + " failed: " + e.what();
            ok = false;
            break;
        }
        lv.tolerance = previous;
        lv.passed = lv.residual < previous;
        ok = ok && lv.passed;
        previous = lv.residual;
        r.levels.push_back(std::move(lv));
    }
    r.passed = ok;
    if (!ok && r.note.empty()) {
        r.note = "distance does not decrease along the sequence";
    }
    return r;
}

CheckReport null_flux_check(const solver::SolveResult& run, Tolerance tol) {
    const auto& u = run.field;
    const auto& front = run.front;
    const auto J = core::memory_flux(u, front, run.phys, run.mem);
    CheckReport r;
    r.name = "null_flux/alpha=" + format("%g", run.mem.alpha);
    r.statement = "flux is exactly 0 in the solid and I^{1-a} J from 0 equals I^{1-a} J from h(x) on liquid nodes";

    double solid = 0.0;
    for (std::size_t k = 0; k < J.levels(); ++k) {
        for (std::size_t i = 0; i < J.nodes(); ++i) {
            if (!front.liquid(i, k)) {
                solid = std::max(solid, std::abs(J(i, k)));
            }
        }
    }

    const double beta = 1.0 - run.mem.alpha;
    const std::size_t last = front.levels() - 1;
    double solid_integral = 0.0;
    if (beta > 0.0) {
        for (std::size_t i = front.liquid_count(last); i < J.nodes(); ++i) {
            std::vector<double> column(last + 1);
            for (std::size_t k = 0; k <= last; ++k) {
                column[k] = J(i, k);
            }
            const frac::SampledFunction from_zero(front.t0(), front.dt(), std::move(column));
            solid_integral =
                std::max(solid_integral, std::abs(frac::rl_integral_at(from_zero, frac::FracOrder(beta), last)));
        }
    }
    const double t = front.time(last);
    const double span = t - front.t0();
    double worst = 0.0;
    double scale = 0.0;
    std::size_t used = 0;
    if (beta > 0.0) {
        const frac::FracOrder order(beta);
        for (std::size_t i = 1; i < front.liquid_count(last); ++i) {
            const double h = front.node_melt_time(i);
            if (t - h < span / 8.0) {
                continue;
            }
            std::vector<double> times{h};
            std::vector<double> values{0.0};
            for (std::size_t k = 0; k <= last; ++k) {
                if (core::mature(front, i, k) && !J.skipped(i, k)) {
                    times.push_back(front.time(k));
                    values.push_back(J(i, k));
                }
            }
            if (times.size() < 3) {
                continue;
            }
            // J at the melt time by linear extrapolation of the first two mature levels.
            values[0] = values[1] - (values[2] - values[1]) * (times[1] - h) / (times[2] - times[1]);
            const core::NodeHistory history(times, values);
            const auto from_h = history.resample(front.dt());
            // Zero extension over [t0, h), jump at h.
            std::vector<double> ext_times{front.t0(), h};
            std::vector<double> ext_values{0.0, 0.0};
            ext_times.insert(ext_times.end(), times.begin(), times.end());
            ext_values.insert(ext_values.end(), values.begin(), values.end());
            const double a = piecewise_linear_integral(ext_times, ext_values, beta, t);
            const double b = frac::rl_integral_at(from_h, order, from_h.last());
            worst = std::max(worst, std::abs(a - b));
            scale = std::max({scale, std::abs(a), std::abs(b)});
            ++used;
        }
    }
    const Grid g = grid_of(run);
    LevelResult lv;
    lv.dx = g.dx;
    lv.dt = g.dt;
    lv.residual = scale > 0.0 ? worst / scale : worst;
    lv.tolerance = tol(g.dx, g.dt);
    lv.details = {{"solid_max_abs", solid},
                  {"solid_integral_max_abs", solid_integral},
                  {"nodes", static_cast<double>(used)}};
    lv.passed = solid == 0.0 && solid_integral == 0.0 && lv.residual < lv.tolerance;
    r.levels.push_back(std::move(lv));
    r.passed = r.levels.back().passed;
    if (solid != 0.0 || solid_integral != 0.0) {
        r.note = "nonzero flux on a solid node";
    } else if (beta == 0.0) {
        r.note = "alpha = 1: no fractional integral to compare";
    }
    return r;
}

std::vector<CheckReport> classical_oracle_check(const core::PhysicalParams& phys, const solver::SolverConfig& base,
                                                std::size_t levels, solver::FrontUpdate mode) {
    const std::string suffix = "/" + solver::to_string(mode);
    CheckReport front;
    front.name = "classical_front" + suffix;
    front.statement = "|s - 2 lambda sqrt(d t)| / s < 2% on [2 t_seed, t_end] at the finest grid";
    CheckReport stefan;
    stefan.name = "classical_stefan_residual" + suffix;
    stefan.statement = "Stefan condition residual converges with order >= 0.5";
    CheckReport relation;
    relation.name = "classical_relation_residual" + suffix;
    relation.statement = "integral relation residual from t = 0 converges with order >= 0.5";

    solver::SolverConfig cfg = base;
    cfg.front_update = mode;
    cfg.checkpoints = 0;
    std::vector<double> f_err;
    std::vector<double> s_res;
    std::vector<double> r_res;
    for (std::size_t lev = 0; lev < levels; ++lev) {
        const auto run = solver::run(phys, core::MemoryParams{1.0, 1.0}, cfg);
        const Grid g = grid_of(run);
        LevelResult lf;
        lf.dx = g.dx;
        lf.dt = g.dt;
        lf.residual = front_relative_error(run);
        lf.tolerance = 0.02;
        lf.passed = lf.residual < lf.tolerance;
        front.levels.push_back(lf);
        f_err.push_back(lf.residual);

        LevelResult ls = lf;
        ls.residual = stefan_max(run);
        ls.tolerance = Tolerance{}(g.dx, g.dt);
        ls.passed = ls.residual < ls.tolerance;
        stefan.levels.push_back(ls);
        s_res.push_back(ls.residual);

        LevelResult lr = ls;
        lr.residual = relation_max(run, run.front.t0());
        lr.passed = lr.residual < lr.tolerance;
        relation.levels.push_back(lr);
        r_res.push_back(lr.residual);

        cfg.dx /= 2.0;
        cfg.dt /= 2.0;
    }
    front.order = observed_order(f_err);
    front.passed = !front.levels.empty() && front.levels.back().passed;
    for (auto* rep : {&stefan, &relation}) {
        const auto& res = rep == &stefan ? s_res : r_res;
        rep->order = observed_order(res);
        rep->passed = rep->order && *rep->order >= 0.5;
        if (!rep->passed) {
            rep->note = "order below 0.5";
        }
    }
    return {front, stefan, relation};
}

} // namespace memstefan::diag
