#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "memstefan/cli/commands.hpp"
#include "memstefan/error.hpp"

int main(int argc, char** argv) {
    namespace ms = memstefan;
    CLI::App app{"Stefan problem with fractional memory flux: solve, verify, converge"};
    app.require_subcommand(1);

    std::string config;
    std::string out = "out";
    std::string suite = "all";
    std::size_t levels = 3;
    std::string front_update;

    auto* solve = app.add_subcommand("solve", "run the solver and write CSV/JSON outputs");
    solve->add_option("--config", config, "INI config file (or a manifest.json)")->required();
    solve->add_option("--out", out, "output directory")->capture_default_str();
    solve->add_option("--front-update", front_update, "integral | pointwise (overrides the config)");

    auto* verify = app.add_subcommand("verify", "run a diagnostics suite");
    verify->add_option("--suite", suite, "operators | lemmas | theorems | limits | all")->capture_default_str();
    verify->add_option("--out", out, "output directory")->capture_default_str();

    auto* converge = app.add_subcommand("converge", "refinement study halving dx and dt");
    converge->add_option("--config", config, "INI config file (or a manifest.json)")->required();
    converge->add_option("--levels", levels, "number of levels (>= 2)")->capture_default_str();
    converge->add_option("--out", out, "output directory for converge.json");
    converge->add_option("--front-update", front_update, "integral | pointwise (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ms::cli::kSuccess : ms::cli::kValidationError;
    }

    std::optional<ms::solver::FrontUpdate> mode;
    if (!front_update.empty()) {
        try {
            mode = ms::solver::parse_front_update(front_update);
        } catch (const ms::InputError& e) {
            std::cerr << "error: " << e.field() << ": " << e.what() << '\n';
            return ms::cli::kValidationError;
        }
    }

    try {
        if (*solve) {
            return ms::cli::cmd_solve(config, out, mode, std::cout);
        }
        if (*verify) {
            return ms::cli::cmd_verify(suite, out, std::cout);
        }
        const bool has_out = converge->count("--out") > 0;
        return ms::cli::cmd_converge(config, levels, has_out ? out : std::string(), mode, std::cout);
    } catch (const ms::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ms::cli::kRuntimeError;
    }
}
