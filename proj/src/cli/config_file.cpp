#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"
#include "memstefan/cli/config_file.hpp"
#include "memstefan/cli/output.hpp"
#include "memstefan/error.hpp"

namespace memstefan::cli {

namespace {

namespace pt = boost::property_tree;

template <class T>
T parse_number(const std::string& text, const std::string& field) {
    T v{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw InputError(field + ": '" + text + "' is not a valid number", field);
    }
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto phys = [&](const char* key, double core::PhysicalParams::*m) {
            t[std::string("physical.") + key] = [m](RunConfig& c, const std::string& v, const std::string& f) {
                c.phys.*m = parse_number<double>(v, f);
            };
        };
        phys("k", &core::PhysicalParams::k);
        phys("rho", &core::PhysicalParams::rho);
        phys("c", &core::PhysicalParams::c);
        phys("l", &core::PhysicalParams::l);
        phys("T0", &core::PhysicalParams::T0);
        phys("Tm", &core::PhysicalParams::Tm);
        t["memory.alpha"] = [](RunConfig& c, const std::string& v, const std::string& f) {
            c.mem.alpha = parse_number<double>(v, f);
        };
        t["memory.mu"] = [](RunConfig& c, const std::string& v, const std::string& f) {
            c.mem.mu = parse_number<double>(v, f);
        };
        auto solver_real = [&](const char* key, double solver::SolverConfig::*m) {
            t[key] = [m](RunConfig& c, const std::string& v, const std::string& f) {
                c.solver.*m = parse_number<double>(v, f);
            };
        };
        solver_real("grid.dx", &solver::SolverConfig::dx);
        solver_real("grid.dt", &solver::SolverConfig::dt);
        solver_real("grid.t_end", &solver::SolverConfig::t_end);
        solver_real("solver.t_seed", &solver::SolverConfig::t_seed);
        solver_real("solver.newton_tol", &solver::SolverConfig::newton_tol);
        t["solver.front_update"] = [](RunConfig& c, const std::string& v, const std::string&) {
            c.solver.front_update = solver::parse_front_update(v);
        };
        t["solver.max_newton_iters"] = [](RunConfig& c, const std::string& v, const std::string& f) {
            c.solver.max_newton_iters = parse_number<int>(v, f);
        };
        t["solver.checkpoints"] = [](RunConfig& c, const std::string& v, const std::string& f) {
            c.solver.checkpoints = parse_number<int>(v, f);
        };
        return t;
    }();
    return table;
}

RunConfig from_manifest(const std::string& text) {
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("config") || !doc["config"].is_object()) {
        throw InputError("manifest has no 'config' object", "config");
    }
    RunConfig cfg;
    for (const auto& [section, body] : doc["config"].items()) {
        if (!body.is_object()) {
            throw InputError("manifest section '" + section + "' is not an object", section);
        }
        for (const auto& [key, value] : body.items()) {
            const std::string field = section + "." + key;
            const auto it = setters().find(field);
            if (it == setters().end()) {
                throw InputError("unknown config key '" + field + "'", field);
            }
            it->second(cfg, value.is_string() ? value.get<std::string>() : value.dump(), field);
        }
    }
    return cfg;
}

} // namespace

void RunConfig::validate() const {
    phys.validate();
    mem.validate();
    solver.validate();
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InputError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw InputError("key '" + section + "' must sit inside a section", section);
        }
        for (const auto& [key, node] : body) {
            const std::string field = section + "." + key;
            const auto it = setters().find(field);
            if (it == setters().end()) {
                throw InputError("unknown config key '" + field + "'", field);
            }
            it->second(cfg, node.data(), field);
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read config file " + path.string(), "config");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = path.extension() == ".json" ? from_manifest(buf.str()) : parse_config(buf.str());
    cfg.validate();
    return cfg;
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream os;
    auto kv = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    os << "[physical]\n";
    kv("k", c.phys.k);
    kv("rho", c.phys.rho);
    kv("c", c.phys.c);
    kv("l", c.phys.l);
    kv("T0", c.phys.T0);
    kv("Tm", c.phys.Tm);
    os << "\n[memory]\n";
    kv("alpha", c.mem.alpha);
    kv("mu", c.mem.mu);
    os << "\n[grid]\n";
    kv("dx", c.solver.dx);
    kv("dt", c.solver.dt);
    kv("t_end", c.solver.t_end);
    os << "\n[solver]\n";
    kv("t_seed", c.solver.t_seed);
    os << "front_update = " << solver::to_string(c.solver.front_update) << '\n';
    kv("newton_tol", c.solver.newton_tol);
    os << "max_newton_iters = " << c.solver.max_newton_iters << '\n';
    os << "checkpoints = " << c.solver.checkpoints << '\n';
    return os.str();
}

} // namespace memstefan::cli
