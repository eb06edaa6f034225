#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "memstefan/cli/commands.hpp"
#include "memstefan/cli/config_file.hpp"
#include "memstefan/cli/output.hpp"
#include "memstefan/core/neumann.hpp"
#include "memstefan/diagnostics/suites.hpp"
#include "memstefan/error.hpp"

namespace memstefan::cli {

namespace {

using nlohmann::ordered_json;

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void report_input_error(const InputError& e, std::ostream& log) {
    log << "error: ";
    if (!e.field().empty()) {
        log << e.field() << ": ";
    }
    log << e.what() << '\n';
}

void report_solver_error(const SolverError& e, std::ostream& log) {
    log << "error: solver failed";
    if (e.time() >= 0.0) {
        log << " at t = " << format_double(e.time());
    }
    log << ": " << e.what() << '\n';
}

void make_dir(const std::filesystem::path& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        throw Error("cannot create output directory " + out.string() + ": " + ec.message());
    }
}

RunConfig load(const std::filesystem::path& config, std::optional<solver::FrontUpdate> front_update) {
    RunConfig cfg = load_config(config);
    if (front_update) {
        cfg.solver.front_update = *front_update;
    }
    return cfg;
}

// Maxima over checkpoints of each residual functional.
struct ResidualMaxima {
    static constexpr const char* names[] = {"implicit_flux", "continuity", "governing_caputo",
                                            "governing_rl", "stefan_condition", "integral_relation"};
    double values[6] = {0, 0, 0, 0, 0, 0};

    explicit ResidualMaxima(const solver::SolveResult& run) {
        for (const auto& c : run.residuals) {
            const double row[6] = {c.implicit_flux,    c.continuity,       c.governing_caputo,
                                   c.governing_rl,     c.stefan_condition, std::abs(c.integral_relation)};
            for (int j = 0; j < 6; ++j) {
                values[j] = std::max(values[j], row[j]);
            }
        }
    }
};

// Front of `fine` at time t by linear interpolation between its levels.
double front_at(const solver::SolveResult& fine, double t) {
    const auto& f = fine.front;
    const double u = (t - f.t0()) / f.dt();
    const auto k = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(u))), f.levels() - 2);
    const double w = u - static_cast<double>(k);
    return (1.0 - w) * f.position(k) + w * f.position(k + 1);
}

double front_difference(const solver::SolveResult& run, const solver::SolveResult& fine) {
    double d = 0.0;
    for (std::size_t k = 0; k < run.front.levels(); ++k) {
        d = std::max(d, std::abs(run.front.position(k) - front_at(fine, run.front.time(k))));
    }
    return d;
}

// L-infinity difference at the last level over nodes of `run` that are
// liquid in both runs.
double temperature_difference(const solver::SolveResult& run, const solver::SolveResult& fine) {
    const auto ratio = static_cast<std::size_t>(std::llround(run.front.dx() / fine.front.dx()));
    const std::size_t lr = run.front.levels() - 1;
    const std::size_t lf = fine.front.levels() - 1;
    double d = 0.0;
    for (std::size_t i = 0; i < run.front.liquid_count(lr); ++i) {
        const std::size_t j = i * ratio;
        if (j < fine.front.liquid_count(lf)) {
            d = std::max(d, std::abs(run.field(i, lr) - fine.field(j, lf)));
        }
    }
    return d;
}

std::string cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12.4e", v);
    return buf;
}

std::string order_cell(std::optional<double> o) {
    char buf[32];
    if (o) {
        std::snprintf(buf, sizeof buf, "%12.2f", *o);
    } else {
        std::snprintf(buf, sizeof buf, "%12s", "-");
    }
    return buf;
}

ordered_json order_json(std::optional<double> o) { return o ? ordered_json(*o) : ordered_json(nullptr); }

} // namespace

int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out,
              std::optional<solver::FrontUpdate> front_update, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load(config, front_update);
    } catch (const InputError& e) {
        report_input_error(e, log);
        return kValidationError;
    }
    const std::string started = timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<solver::SolveResult> result;
    try {
        result = solver::run(cfg.phys, cfg.mem, cfg.solver);
    } catch (const SolverError& e) {
        report_solver_error(e, log);
        return kRuntimeError;
    } catch (const InputError& e) {
        report_input_error(e, log);
        return kValidationError;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const solver::SolveResult& run = *result;

    try {
        make_dir(out);
        const std::pair<const char*, std::string> files[] = {
            {"front.csv", front_csv(run)},
            {"profiles.csv", profiles_csv(run)},
            {"flux.csv", flux_csv(run)},
            {"residuals.json", residuals_json(run).dump(2) + "\n"},
        };
        ordered_json inventory = ordered_json::array();
        for (const auto& [name, text] : files) {
            write_file(out / name, text);
            char crc[16];
            std::snprintf(crc, sizeof crc, "%08x", crc32(text));
            inventory.push_back({{"file", name}, {"bytes", text.size()}, {"crc32", crc}});
        }

        const diag::Tolerance tol;
        const double bound = tol(run.front.dx(), run.front.dt());
        const ResidualMaxima maxima(run);
        ordered_json residual_pass = ordered_json::object();
        for (int j = 0; j < 6; ++j) {
            residual_pass[ResidualMaxima::names[j]] = maxima.values[j] < bound;
        }
        const ordered_json manifest = {
            {"artifact", "memstefan"},
            {"version", MEMSTEFAN_VERSION},
            {"config", config_json(cfg)},
            {"outputs", inventory},
            {"summary",
             {{"final_time", run.front.end_time()},
              {"final_front", run.front.reach()},
              {"max_principle_ok", run.max_principle_ok()},
              {"tolerance", bound},
              {"residuals_below_tolerance", residual_pass},
              {"warnings", run.stats.warnings.size()}}}};
        write_file(out / "manifest.json", manifest.dump(2) + "\n");

        std::ostringstream rl;
        rl << "started  " << started << '\n'
           << "finished " << timestamp() << '\n'
           << "elapsed_s " << elapsed << '\n'
           << "config " << std::filesystem::absolute(config).string() << '\n'
           << "front_update " << solver::to_string(cfg.solver.front_update) << '\n'
           << "steps " << run.stats.steps << " dt " << format_double(run.stats.dt)
           << (run.stats.dt_capped ? " (capped)" : "") << '\n'
           << "newton_iterations " << run.stats.newton_iterations << '\n';
        for (const auto& w : run.stats.warnings) {
            rl << "warning " << w << '\n';
        }
        write_file(out / "run.log", rl.str());
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kRuntimeError;
    }

    log << "s(" << format_double(run.front.end_time()) << ") = " << format_double(run.front.reach()) << '\n';
    for (const auto& w : run.stats.warnings) {
        log << "warning: " << w << '\n';
    }
    log << "wrote " << out.string() << '\n';
    return kSuccess;
}

int cmd_verify(const std::string& suite, const std::filesystem::path& out, std::ostream& log) {
    diag::Suite which;
    try {
        which = diag::parse_suite(suite);
    } catch (const InputError& e) {
        report_input_error(e, log);
        return kValidationError;
    }
    std::vector<diag::CheckReport> reports;
    try {
        reports = diag::run_suite(which);
    } catch (const SolverError& e) {
        report_solver_error(e, log);
        return kRuntimeError;
    }
    log << summary_table(reports);
    try {
        make_dir(out);
        ordered_json doc = {{"suite", diag::to_string(which)}};
        doc.update(reports_json(reports));
        write_file(out / "verify.json", doc.dump(2) + "\n");
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return diag::all_passed(reports) ? kSuccess : kVerificationFailure;
}

int cmd_converge(const std::filesystem::path& config, std::size_t levels, const std::filesystem::path& out,
                 std::optional<solver::FrontUpdate> front_update, std::ostream& log) {
    if (levels < 2) {
        log << "error: levels: a convergence study needs at least 2 levels\n";
        return kValidationError;
    }
    RunConfig cfg;
    try {
        cfg = load(config, front_update);
    } catch (const InputError& e) {
        report_input_error(e, log);
        return kValidationError;
    }
    std::vector<solver::SolveResult> runs;
    try {
        diag::StudySetup setup{cfg.phys, cfg.solver, levels};
        runs = diag::refinement_runs(setup, cfg.mem, cfg.solver.front_update);
    } catch (const SolverError& e) {
        report_solver_error(e, log);
        return kRuntimeError;
    }

    const auto& finest = runs.back();
    const bool classical = cfg.mem.classical();
    std::vector<double> front_err;
    std::vector<double> temp_err;
    std::vector<double> successive;
    std::vector<double> oracle;
    std::vector<std::vector<double>> residual(6);
    ordered_json rows = ordered_json::array();
    for (std::size_t lev = 0; lev < runs.size(); ++lev) {
        const auto& run = runs[lev];
        const ResidualMaxima maxima(run);
        ordered_json r = {{"dx", run.front.dx()}, {"dt", run.front.dt()}};
        if (lev + 1 < runs.size()) {
            front_err.push_back(front_difference(run, finest));
            temp_err.push_back(temperature_difference(run, finest));
            successive.push_back(front_difference(run, runs[lev + 1]));
            r["front_vs_finest"] = front_err.back();
            r["temperature_vs_finest"] = temp_err.back();
            r["front_vs_next"] = successive.back();
        }
        if (classical) {
            oracle.push_back(diag::distance_to_classical(run));
            r["front_vs_oracle"] = oracle.back();
        }
        for (int j = 0; j < 6; ++j) {
            residual[j].push_back(maxima.values[j]);
            r[ResidualMaxima::names[j]] = maxima.values[j];
        }
        rows.push_back(r);
    }

    std::ostringstream table;
    table << std::setw(12) << "dx" << std::setw(12) << "dt" << std::setw(12) << "front" << std::setw(12)
          << "temperature";
    if (classical) {
        table << std::setw(12) << "oracle";
    }
    for (const char* name : ResidualMaxima::names) {
        table << ' ' << std::setw(11) << std::string(name).substr(0, 11);
    }
    table << '\n';
    for (std::size_t lev = 0; lev < runs.size(); ++lev) {
        table << cell(runs[lev].front.dx()) << cell(runs[lev].front.dt());
        if (lev < front_err.size()) {
            table << cell(front_err[lev]) << cell(temp_err[lev]);
        } else {
            table << std::setw(12) << "(finest)" << std::setw(12) << "-";
        }
        if (classical) {
            table << cell(oracle[lev]);
        }
        for (int j = 0; j < 6; ++j) {
            table << ' ' << cell(residual[j][lev]).substr(1);
        }
        table << '\n';
    }
    ordered_json orders = {{"front_vs_finest", order_json(diag::observed_order(front_err))},
                           {"temperature_vs_finest", order_json(diag::observed_order(temp_err))},
                           {"front_vs_next", order_json(diag::observed_order(successive))}};
    table << std::setw(24) << "order" << order_cell(diag::observed_order(front_err))
          << order_cell(diag::observed_order(temp_err));
    if (classical) {
        orders["front_vs_oracle"] = order_json(diag::observed_order(oracle));
        table << order_cell(diag::observed_order(oracle));
    }
    for (int j = 0; j < 6; ++j) {
        const auto o = diag::observed_order(residual[j]);
        orders[ResidualMaxima::names[j]] = order_json(o);
        table << ' ' << order_cell(o).substr(1);
    }
    table << '\n';
    log << table.str();

    if (!out.empty()) {
        try {
            make_dir(out);
            const ordered_json doc = {{"config", config_json(cfg)}, {"levels", rows}, {"orders", orders}};
            write_file(out / "converge.json", doc.dump(2) + "\n");
        } catch (const Error& e) {
            log << "error: " << e.what() << '\n';
            return kRuntimeError;
        }
    }
    return kSuccess;
}

} // namespace memstefan::cli
