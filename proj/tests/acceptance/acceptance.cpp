// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Every failing check is listed under its criterion.

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "memstefan/cli/commands.hpp"
#include "memstefan/diagnostics/checks.hpp"
#include "memstefan/diagnostics/suites.hpp"
#include "memstefan/error.hpp"

namespace fs = std::filesystem;
using namespace memstefan;

namespace {

struct Outcome {
    bool passed = false;
    std::vector<std::string> lines;
};

Outcome from_reports(const std::vector<diag::CheckReport>& reports) {
    Outcome o;
    o.passed = !reports.empty() && diag::all_passed(reports);
    for (const auto& r : reports) {
        if (!r.passed) {
            o.lines.push_back(diag::summary_line(r));
        }
    }
    return o;
}

diag::CheckReport failed(std::string name, const std::exception& e) {
    diag::CheckReport r;
    r.name = std::move(name);
    r.note = std::string("run failed: ") + e.what();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char* kDeterminismConfig = R"([physical]
k = 1
rho = 1
c = 1
l = 1
T0 = 1
Tm = 0

[memory]
alpha = 0.75
mu = 1

[grid]
dx = 0.02
dt = 0.002
t_end = 0.5

[solver]
t_seed = 0.02
front_update = integral
checkpoints = 4
)";

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "memstefan_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config = root / "run.ini";
    std::ofstream(config) << kDeterminismConfig;

    std::ostringstream log;
    const fs::path a = root / "a";
    const fs::path b = root / "b";
    if (cli::cmd_solve(config, a, std::nullopt, log) != cli::kSuccess ||
        cli::cmd_solve(config, b, std::nullopt, log) != cli::kSuccess) {
        o.lines.push_back("solve failed: " + log.str());
        return o;
    }
    std::size_t compared = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto ext = entry.path().extension();
        if (ext != ".csv" && ext != ".json") {
            continue;
        }
        ++compared;
        if (slurp(entry.path()) != slurp(b / entry.path().filename())) {
            same = false;
            o.lines.push_back("differs: " + entry.path().filename().string());
        }
    }
    o.passed = same && compared >= 5;
    o.lines.push_back(std::to_string(compared) + " CSV/JSON files compared");
    fs::remove_all(root);
    return o;
}

struct Criterion {
    int id;
    std::string title;
    double budget_s; // 0 means no limit
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const diag::StudySetup setup;

    const std::vector<Criterion> criteria = {
        {1, "operator power rule", 10.0, [] { return from_reports(diag::power_rule_suite()); }},
        {2, "left inverse and RL-Caputo gap", 10.0, [] { return from_reports(diag::inverse_identity_suite()); }},
        {3, "integer-order limits", 10.0, [] { return from_reports(diag::limit_suite()); }},
        {4, "jumping formulas", 30.0, [] { return from_reports(diag::jumping_suite()); }},
        {5, "classical oracle", 120.0,
         [&] {
             std::vector<diag::CheckReport> all;
             for (auto mode : {solver::FrontUpdate::IntegralRelation, solver::FrontUpdate::PointwiseStefan}) {
                 try {
                     for (auto& r : diag::classical_oracle_check(setup.phys, setup.base, setup.levels, mode)) {
                         all.push_back(std::move(r));
                     }
                 } catch (const SolverError& e) {
                     all.push_back(failed("classical/" + solver::to_string(mode), e));
                 }
             }
             return from_reports(all);
         }},
        {6, "integral relation and Stefan condition cross-check", 300.0,
         [&] {
             std::vector<diag::CheckReport> all;
             for (double alpha : {0.5, 0.75}) {
                 for (auto& r : diag::crosscheck_suite(setup, alpha)) {
                     all.push_back(std::move(r));
                 }
             }
             return from_reports(all);
         }},
        {7, "Caputo and RL governing forms", 180.0,
         [&] {
             std::vector<diag::CheckReport> all;
             for (double alpha : {0.5, 0.75}) {
                 all.push_back(diag::equivalence_suite(setup, alpha));
             }
             return from_reports(all);
         }},
        {8, "alpha -> 1 continuity", 300.0,
         [&] {
             const double alphas[] = {0.7, 0.9, 0.99};
             return from_reports({diag::alpha_limit_study(setup.phys, setup.base, alphas)});
         }},
        {9, "null flux before melting", 30.0,
         [&] {
             std::vector<diag::CheckReport> all;
             for (double alpha : {0.5, 0.75}) {
                 try {
                     all.push_back(diag::null_flux_check(solver::run(setup.phys, {alpha, 1.0}, setup.base)));
                 } catch (const SolverError& e) {
                     all.push_back(failed("null_flux", e));
                 }
             }
             return from_reports(all);
         }},
        {10, "deterministic output", 0.0, determinism},
    };

    int passed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.lines.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = c.budget_s == 0.0 || elapsed < c.budget_s;
        const bool ok = o.passed && in_budget;
        passed += ok ? 1 : 0;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << elapsed << " s";
        if (c.budget_s > 0.0) {
            std::cout << ", budget " << c.budget_s << " s";
        }
        std::cout << ")\n";
        if (!in_budget) {
            std::cout << "    over the runtime budget\n";
        }
        for (const auto& line : o.lines) {
            std::cout << "    " << line << '\n';
        }
    }
    std::cout << "criteria evaluated: " << criteria.size() << ", passed: " << passed << '\n';
    return 0;
}
