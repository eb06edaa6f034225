#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "memstefan/cli/commands.hpp"
#include "memstefan/cli/config_file.hpp"
#include "memstefan/cli/output.hpp"
#include "memstefan/core/neumann.hpp"
#include "memstefan/error.hpp"

using namespace memstefan;
using namespace memstefan::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("memstefan_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_config(const TempDir& dir, const std::string& text, const std::string& name = "run.ini") {
    const fs::path p = dir.path() / name;
    std::ofstream(p) << text;
    return p;
}

const char* kClassical = R"([physical]
k = 1
rho = 1
c = 1
l = 1
T0 = 1
Tm = 0

[memory]
alpha = 1
mu = 1

[grid]
dx = 0.02
dt = 0.002
t_end = 0.5

[solver]
t_seed = 0.02
front_update = integral
checkpoints = 2
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

} // namespace

TEST(FormatDouble, RoundTripsExactly) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> exp(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(rng), exp(rng));
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Config, IniRoundTrip) {
    RunConfig c;
    c.phys.l = 1.0 / 3.0;
    c.mem = {0.7, 1.1};
    c.solver.dt = 0.1 + 0.2;
    c.solver.front_update = solver::FrontUpdate::PointwiseStefan;
    c.solver.checkpoints = 7;
    const RunConfig back = parse_config(to_ini(c));
    EXPECT_EQ(back.phys.l, c.phys.l);
    EXPECT_EQ(back.mem.alpha, 0.7);
    EXPECT_EQ(back.mem.mu, 1.1);
    EXPECT_EQ(back.solver.dt, c.solver.dt);
    EXPECT_EQ(back.solver.front_update, solver::FrontUpdate::PointwiseStefan);
    EXPECT_EQ(back.solver.checkpoints, 7);
    EXPECT_EQ(to_ini(back), to_ini(c));
}

TEST(Config, RejectsUnknownKeysAndBadNumbers) {
    try {
        parse_config("[grid]\ndz = 0.1\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.field(), "grid.dz");
    }
    try {
        parse_config("[memory]\nalpha = half\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.field(), "memory.alpha");
    }
    EXPECT_THROW(parse_config("[solver]\nfront_update = sideways\n"), InputError);
    EXPECT_THROW(parse_config("alpha = 0.5\n"), InputError);
}

TEST(Solve, InvalidAlphaIsAValidationError) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "alpha = 1", "alpha = 1.5"));
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(cfg, dir.path() / "out", std::nullopt, log), kValidationError);
    EXPECT_NE(log.str().find("alpha"), std::string::npos);
    EXPECT_NE(log.str().find("(0,1]"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir.path() / "out"));
}

TEST(Solve, BoundaryBelowMeltIsAValidationError) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "T0 = 1", "T0 = 0"));
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(cfg, dir.path() / "out", std::nullopt, log), kValidationError);
    EXPECT_NE(log.str().find("T0 > Tm"), std::string::npos);
}

TEST(Solve, MissingConfigIsAValidationError) {
    TempDir dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(dir.path() / "nope.ini", dir.path() / "out", std::nullopt, log), kValidationError);
}

TEST(Solve, SolverFailureIsARuntimeError) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "dx = 0.02", "dx = 0.5"));
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(cfg, dir.path() / "out", std::nullopt, log), kRuntimeError);
    EXPECT_NE(log.str().find("solver failed"), std::string::npos);
}

TEST(Solve, WritesDocumentedFiles) {
    TempDir dir;
    const auto cfg = write_config(dir, kClassical);
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(cfg, dir.path() / "out", std::nullopt, log), kSuccess) << log.str();
    for (const char* f : {"front.csv", "profiles.csv", "flux.csv", "residuals.json", "manifest.json", "run.log"}) {
        EXPECT_TRUE(fs::exists(dir.path() / "out" / f)) << f;
    }
    const std::string front = slurp(dir.path() / "out" / "front.csv");
    EXPECT_EQ(front.rfind("t,s,ds_dt\n", 0), 0u);
    EXPECT_EQ(slurp(dir.path() / "out" / "profiles.csv").rfind("t,x,u\n", 0), 0u);
    EXPECT_EQ(slurp(dir.path() / "out" / "flux.csv").rfind("t,x,J\n", 0), 0u);

    const auto manifest = nlohmann::json::parse(slurp(dir.path() / "out" / "manifest.json"));
    EXPECT_EQ(manifest["config"]["memory"]["alpha"].get<double>(), 1.0);
    EXPECT_EQ(manifest["outputs"].size(), 4u);
    EXPECT_EQ(manifest["outputs"][0]["crc32"].get<std::string>().size(), 8u);
    const auto residuals = nlohmann::json::parse(slurp(dir.path() / "out" / "residuals.json"));
    EXPECT_EQ(residuals["checkpoints"].size(), 2u);
}

// Front column of an alpha = 1 run against the similarity solution.
TEST(Solve, ClassicalFrontMatchesOracle) {
    TempDir dir;
    const auto cfg = write_config(dir, kClassical);
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(cfg, dir.path() / "out", std::nullopt, log), kSuccess);
    std::istringstream csv(slurp(dir.path() / "out" / "front.csv"));
    std::string line;
    std::getline(csv, line);
    const core::NeumannSolution exact(core::PhysicalParams{});
    int rows = 0;
    while (std::getline(csv, line)) {
        const double t = std::strtod(line.c_str(), nullptr);
        const double s = std::strtod(line.c_str() + line.find(',') + 1, nullptr);
        if (t >= 0.04) {
            EXPECT_NEAR(s, exact.front(t), 0.02 * s);
            ++rows;
        }
    }
    EXPECT_GT(rows, 100);
}

TEST(Solve, RepeatedRunsAreByteIdentical) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "alpha = 1", "alpha = 0.6"));
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(cfg, dir.path() / "a", std::nullopt, log), kSuccess);
    ASSERT_EQ(cmd_solve(cfg, dir.path() / "b", std::nullopt, log), kSuccess);
    for (const char* f : {"front.csv", "profiles.csv", "flux.csv", "residuals.json", "manifest.json"}) {
        EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
    }
}

TEST(Solve, ManifestReplaysTheRun) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "dt = 0.002", "dt = 0.0030000000000000001"));
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(cfg, dir.path() / "a", solver::FrontUpdate::PointwiseStefan, log), kSuccess);
    ASSERT_EQ(cmd_solve(dir.path() / "a" / "manifest.json", dir.path() / "b", std::nullopt, log), kSuccess);
    for (const char* f : {"front.csv", "profiles.csv", "flux.csv", "residuals.json", "manifest.json"}) {
        EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
    }
}

TEST(Verify, UnknownSuiteIsAUsageError) {
    TempDir dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_verify("everything", dir.path(), log), kValidationError);
}

TEST(Verify, LemmaSuiteWritesReport) {
    TempDir dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_verify("lemmas", dir.path(), log), kSuccess);
    const auto doc = nlohmann::json::parse(slurp(dir.path() / "verify.json"));
    EXPECT_EQ(doc["suite"], "lemmas");
    EXPECT_EQ(doc["total"], 4);
    EXPECT_EQ(doc["failed"], 0);
    EXPECT_NE(log.str().find("4/4 checks passed"), std::string::npos);
}

TEST(Converge, NeedsTwoLevels) {
    TempDir dir;
    const auto cfg = write_config(dir, kClassical);
    std::ostringstream log;
    EXPECT_EQ(cmd_converge(cfg, 1, {}, std::nullopt, log), kValidationError);
}

TEST(Converge, ClassicalFrontOrder) {
    TempDir dir;
    const auto cfg = write_config(dir, kClassical);
    std::ostringstream log;
    ASSERT_EQ(cmd_converge(cfg, 3, dir.path(), std::nullopt, log), kSuccess);
    const auto doc = nlohmann::json::parse(slurp(dir.path() / "converge.json"));
    EXPECT_GE(doc["orders"]["front_vs_oracle"].get<double>(), 0.5);
    EXPECT_EQ(doc["levels"].size(), 3u);
}

TEST(Converge, FractionalFrontIsCauchy) {
    TempDir dir;
    const auto cfg = write_config(dir, replace(kClassical, "alpha = 1", "alpha = 0.5"));
    std::ostringstream log;
    ASSERT_EQ(cmd_converge(cfg, 3, dir.path(), std::nullopt, log), kSuccess);
    const auto doc = nlohmann::json::parse(slurp(dir.path() / "converge.json"));
    EXPECT_LT(doc["levels"][1]["front_vs_next"].get<double>(), doc["levels"][0]["front_vs_next"].get<double>());
}
