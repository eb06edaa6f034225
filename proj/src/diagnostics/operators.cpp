#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/error.hpp"

namespace memstefan::diag {

namespace {

constexpr double kRoundOff = 1e-12;

bool in_window(const frac::SampledFunction& f, std::size_t n) {
    return f.time(n) - f.start() >= (f.end() - f.start()) / 8.0;
}

double windowed_max(const frac::SampledFunction& f) {
    double m = 0.0;
    for (std::size_t n = 1; n < f.size(); ++n) {
        if (in_window(f, n)) {
            m = std::max(m, std::abs(f[n]));
        }
    }
    return m;
}

frac::SampledFunction apply(frac::Operator op, const frac::SampledFunction& f, frac::FracOrder beta) {
    switch (op) {
    case frac::Operator::RlIntegral:
        return frac::rl_integral(f, beta);
    case frac::Operator::RlDerivative:
        return frac::rl_derivative(f, beta);
    case frac::Operator::Caputo:
        return frac::caputo_derivative(f, beta);
    }
    throw InputError("unknown operator");
}

// Power rule passes on round-off or on order >= 1 with the last error below
// the bound.
void finalize_convergence(CheckReport& r, double bound) {
    std::vector<double> errors;
    for (auto& lv : r.levels) {
        lv.tolerance = bound;
        lv.passed = lv.residual < bound;
        errors.push_back(lv.residual);
    }
    r.order = observed_order(errors);
    const double last = errors.back();
    if (last < kRoundOff) {
        r.passed = true;
        r.note = "round-off";
    } else {
        r.passed = last < bound && r.order && *r.order >= 1.0 - 1e-9;
        if (!r.passed) {
            r.note = "needs error < bound at the finest size and order >= 1";
        }
    }
}

std::string beta_label(double beta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", beta);
    return buf;
}

} // namespace

double power_rule(frac::Operator op, double p, double beta, double elapsed) {
    const double shift = op == frac::Operator::RlIntegral ? beta : -beta;
    if (op == frac::Operator::Caputo && p == 0.0) {
        return 0.0;
    }
    const double denom_arg = p + 1.0 + shift;
    if (denom_arg <= 0.0 && denom_arg == std::floor(denom_arg)) {
        return 0.0; // 1 / Gamma at a pole
    }
    return std::tgamma(p + 1.0) / std::tgamma(denom_arg) * std::pow(elapsed, p + shift);
}

double power_rule_error(frac::Operator op, double p, double beta, std::size_t intervals) {
    const double step = 1.0 / static_cast<double>(intervals);
    const auto f = frac::SampledFunction::sample(0.0, step, intervals + 1, [p](double t) {
        return p == 0.0 ? 1.0 : std::pow(t, p);
    });
    const auto approx = apply(op, f, frac::FracOrder(beta));
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t n = 1; n < f.size(); ++n) {
        if (!in_window(f, n)) {
            continue;
        }
        const double exact = power_rule(op, p, beta, f.time(n));
        err = std::max(err, std::abs(approx[n] - exact));
        scale = std::max(scale, std::abs(exact));
    }
    return scale > 0.0 ? err / scale : err;
}

CheckReport power_rule_check(frac::Operator op, double p, double beta, std::span<const std::size_t> sizes,
                             double bound) {
    CheckReport r;
    r.name = "power_rule/" + frac::to_string(op) + "/p=" + beta_label(p) + "/beta=" + beta_label(beta);
    r.statement = "operator applied to (t-a)^p matches the Gamma-ratio closed form";
    for (std::size_t n : sizes) {
        LevelResult lv;
        lv.dx = 1.0 / static_cast<double>(n);
        lv.residual = power_rule_error(op, p, beta, n);
        r.levels.push_back(lv);
    }
    finalize_convergence(r, bound);
    return r;
}

std::vector<CheckReport> power_rule_suite() {
    static constexpr std::array<std::size_t, 3> sizes{256, 512, 1024};
    std::vector<CheckReport> out;
    for (auto op : {frac::Operator::RlIntegral, frac::Operator::RlDerivative, frac::Operator::Caputo}) {
        for (double p : {0.0, 0.5, 1.0, 2.0}) {
            for (double beta : {0.25, 0.5, 0.75, 1.0}) {
                out.push_back(power_rule_check(op, p, beta, sizes));
            }
        }
    }
    return out;
}

std::vector<CheckReport> inverse_identity_suite(double bound) {
    static constexpr std::array<std::size_t, 3> sizes{256, 512, 1024};
    struct Family {
        const char* label;
        double start;
    };
    static constexpr std::array<Family, 2> families{{{"a=0", 0.0}, {"a=0.5", 0.5}}};
    std::vector<CheckReport> out;
    for (const auto& fam : families) {
        for (double beta : {0.25, 0.5, 0.75}) {
            CheckReport inv;
            inv.name = std::string("left_inverse/") + fam.label + "/beta=" + beta_label(beta);
            inv.statement = "RL D^b I^b f = f";
            CheckReport gap;
            gap.name = std::string("rl_caputo_gap/") + fam.label + "/beta=" + beta_label(beta);
            gap.statement = "RL D^b f - Caputo D^b f = f(a)(t-a)^-b / Gamma(1-b)";
            for (std::size_t n : sizes) {
                const double step = 1.0 / static_cast<double>(n);
                const double a = fam.start;
                const auto f = frac::SampledFunction::sample(a, step, n + 1, [a](double t) {
                    const double e = t - a;
                    return 1.0 + e + e * e;
                });
                const frac::FracOrder b(beta);
                const double scale = windowed_max(f);
                LevelResult li;
                li.dx = step;
                li.residual = windowed_max(frac::left_inverse_residual(f, b)) / scale;
                inv.levels.push_back(li);
                LevelResult lg;
                lg.dx = step;
                lg.residual = windowed_max(frac::rl_caputo_gap(f, b)) / scale;
                gap.levels.push_back(lg);
            }
            finalize_convergence(inv, bound);
            finalize_convergence(gap, bound);
            out.push_back(std::move(inv));
            out.push_back(std::move(gap));
        }
    }
    return out;
}

std::vector<CheckReport> limit_suite() {
    constexpr std::size_t n = 1024;
    const auto f = frac::SampledFunction::sample(0.0, 1.0 / n, n + 1, [](double t) { return t + 0.5 * t * t; });
    auto study = [&](frac::Operator op, std::initializer_list<double> betas, const char* direction) {
        std::vector<frac::FracOrder> orders;
        for (double b : betas) {
            orders.emplace_back(b);
        }
        CheckReport r;
        r.name = "limit/" + frac::to_string(op);
        r.statement = std::string("deviation from the integer-order limit decreases as beta -> ") + direction;
        std::vector<double> dev;
        for (const auto& row : frac::limit_probe(f, orders)) {
            if (row.op != op) {
                continue;
            }
            LevelResult lv;
            lv.dx = 1.0 / n;
            lv.residual = row.max_deviation;
            lv.tolerance = dev.empty() ? INFINITY : dev.back();
            lv.passed = row.max_deviation < lv.tolerance;
            lv.details.emplace_back("beta", row.beta);
            dev.push_back(row.max_deviation);
            r.levels.push_back(std::move(lv));
        }
        r.passed = frac::is_monotone_decreasing(dev) && std::adjacent_find(dev.begin(), dev.end()) == dev.end();
        if (!r.passed) {
            r.note = "deviation does not decrease along the sequence";
        }
        return r;
    };
    return {study(frac::Operator::RlIntegral, {0.5, 0.1, 0.01, 0.001}, "0"),
            study(frac::Operator::RlDerivative, {0.5, 0.9, 0.99, 0.999}, "1"),
            study(frac::Operator::Caputo, {0.5, 0.9, 0.99, 0.999}, "1")};
}

} // namespace memstefan::diag
