#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>

#include "memstefan/cli/output.hpp"
#include "memstefan/core/residuals.hpp"
#include "memstefan/error.hpp"

namespace memstefan::cli {

namespace {

using nlohmann::ordered_json;

// NaN and infinities become null.
ordered_json number(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

std::string row(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) {
        if (!s.empty()) {
            s += ',';
        }
        s += format_double(v);
    }
    s += '\n';
    return s;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::vector<std::size_t> profile_levels(const solver::SolveResult& run) {
    std::vector<std::size_t> levels;
    for (const auto& c : run.residuals) {
        levels.push_back(c.level);
    }
    if (levels.empty()) {
        levels.push_back(run.front.levels() - 1);
    }
    return levels;
}

std::string front_csv(const solver::SolveResult& run) {
    std::string s = "t,s,ds_dt\n";
    const auto& f = run.front;
    for (std::size_t k = 0; k < f.levels(); ++k) {
        s += row({f.time(k), f.position(k), f.levels() >= 3 ? f.velocity(k) : NAN});
    }
    return s;
}

std::string profiles_csv(const solver::SolveResult& run) {
    std::string s = "t,x,u\n";
    const auto& f = run.front;
    for (std::size_t k : profile_levels(run)) {
        for (std::size_t i = 0; i < f.liquid_count(k); ++i) {
            s += row({f.time(k), f.node(i), run.field(i, k)});
        }
        s += row({f.time(k), f.position(k), run.phys.Tm});
    }
    return s;
}

std::string flux_csv(const solver::SolveResult& run) {
    std::string s = "t,x,J\n";
    const auto J = core::memory_flux(run.field, run.front, run.phys, run.mem);
    for (std::size_t k : profile_levels(run)) {
        for (std::size_t i = 0; i < run.front.liquid_count(k); ++i) {
            if (!J.skipped(i, k)) {
                s += row({run.front.time(k), run.front.node(i), J(i, k)});
            }
        }
    }
    return s;
}

ordered_json residuals_json(const solver::SolveResult& run) {
    ordered_json checkpoints = ordered_json::array();
    for (const auto& c : run.residuals) {
        checkpoints.push_back({{"t", number(c.t)},
                               {"level", c.level},
                               {"implicit_flux", number(c.implicit_flux)},
                               {"continuity", number(c.continuity)},
                               {"governing_caputo", number(c.governing_caputo)},
                               {"governing_rl", number(c.governing_rl)},
                               {"stefan_condition", number(c.stefan_condition)},
                               {"integral_relation", number(c.integral_relation)}});
    }

    core::ResidualOptions window;
    window.from_time = 2.0 * run.seed_time();
    double stefan = NAN;
    try {
        stefan = core::max_residual(core::stefan_condition_residual(run.field, run.front, run.phys, run.mem, window));
    } catch (const Error&) {
        // left as null: the front receded somewhere in the window
    }
    double relation = 0.0;
    for (const auto& terms :
         core::integral_relation_series(run.field, run.front, run.phys, run.mem, run.seed_time())) {
        if (terms.t >= window.from_time) {
            relation = std::max(relation, std::abs(terms.relative()));
        }
    }
    const auto monitor = core::monitor_field(run.field, run.front, run.phys);

    ordered_json stats = {{"seed_level", run.stats.seed_level},
                          {"dt", number(run.stats.dt)},
                          {"dt_capped", run.stats.dt_capped},
                          {"steps", run.stats.steps},
                          {"max_coupling_iterations", run.stats.max_coupling_iterations},
                          {"newton_iterations", run.stats.newton_iterations},
                          {"multi_crossing_steps", run.stats.multi_crossing_steps},
                          {"max_principle_violation", number(run.stats.max_principle_violation)},
                          {"max_principle_time", number(run.stats.max_principle_time)},
                          {"warnings", run.stats.warnings}};

    return {{"checkpoints", checkpoints},
            {"window_start", number(window.from_time)},
            {"stefan_condition_max", number(stefan)},
            {"integral_relation_max", number(relation)},
            {"boundary_violation", number(monitor.boundary_violation)},
            {"solid_violation", number(monitor.solid_violation)},
            {"stats", stats}};
}

ordered_json config_json(const RunConfig& c) {
    return {{"physical",
             {{"k", c.phys.k}, {"rho", c.phys.rho}, {"c", c.phys.c}, {"l", c.phys.l}, {"T0", c.phys.T0},
              {"Tm", c.phys.Tm}}},
            {"memory", {{"alpha", c.mem.alpha}, {"mu", c.mem.mu}}},
            {"grid", {{"dx", c.solver.dx}, {"dt", c.solver.dt}, {"t_end", c.solver.t_end}}},
            {"solver",
             {{"t_seed", c.solver.t_seed},
              {"front_update", solver::to_string(c.solver.front_update)},
              {"newton_tol", c.solver.newton_tol},
              {"max_newton_iters", c.solver.max_newton_iters},
              {"checkpoints", c.solver.checkpoints}}}};
}

ordered_json report_json(const diag::CheckReport& r) {
    ordered_json levels = ordered_json::array();
    for (const auto& lv : r.levels) {
        ordered_json details = ordered_json::object();
        for (const auto& [name, value] : lv.details) {
            details[name] = number(value);
        }
        levels.push_back({{"dx", number(lv.dx)},
                          {"dt", number(lv.dt)},
                          {"residual", number(lv.residual)},
                          {"tolerance", number(lv.tolerance)},
                          {"passed", lv.passed},
                          {"details", details}});
    }
    return {{"name", r.name},
            {"statement", r.statement},
            {"passed", r.passed},
            {"order", r.order ? number(*r.order) : ordered_json(nullptr)},
            {"note", r.note},
            {"levels", levels}};
}

ordered_json reports_json(std::span<const diag::CheckReport> reports) {
    ordered_json checks = ordered_json::array();
    std::size_t passed = 0;
    for (const auto& r : reports) {
        checks.push_back(report_json(r));
        passed += r.passed ? 1 : 0;
    }
    return {{"total", reports.size()}, {"passed", passed}, {"failed", reports.size() - passed}, {"checks", checks}};
}

std::string summary_table(std::span<const diag::CheckReport> reports) {
    std::size_t width = 5;
    for (const auto& r : reports) {
        width = std::max(width, r.name.size());
    }
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %-*s %12s %12s %8s\n", "", static_cast<int>(width), "check", "residual",
                  "tolerance", "order");
    os << buf;
    std::size_t passed = 0;
    for (const auto& r : reports) {
        const double res = r.levels.empty() ? NAN : r.levels.back().residual;
        const double tol = r.levels.empty() ? NAN : r.levels.back().tolerance;
        char order[16] = "-";
        if (r.order) {
            std::snprintf(order, sizeof order, "%.2f", *r.order);
        }
        std::snprintf(buf, sizeof buf, "%-6s %-*s %12.3e %12.3e %8s", r.passed ? "PASS" : "FAIL",
                      static_cast<int>(width), r.name.c_str(), res, tol, order);
        os << buf;
        if (!r.note.empty()) {
            os << "  " << r.note;
        }
        os << '\n';
        passed += r.passed ? 1 : 0;
    }
    os << passed << "/" << reports.size() << " checks passed\n";
    return os.str();
}

std::uint32_t crc32(const std::string& bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

} // namespace memstefan::cli
