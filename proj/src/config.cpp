#include "frac/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "frac/errors.hpp"
#include "frac/extension.hpp"

namespace frac {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = val;
    }
    return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": field " + section + "." + key + ": not a number ('" +
                          it->second + "')");
    }
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
    const double v = get_double(section, key, static_cast<double>(fallback));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError(origin_ + ": field " + section + "." + key + ": not an integer");
    return i;
}

std::vector<double> ConfigFile::get_list(const std::string& section,
                                         const std::string& key) const {
    const auto it = values_.find(section + "." + key);
    std::vector<double> out;
    if (it == values_.end()) return out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": field " + section + "." + key + ": bad list entry '" +
                              item + "'");
        }
    }
    return out;
}

std::string ConfigFile::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string ConfigFile::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

double RunConfig::kappa() const {
    if (kappa_mode == "normalized") return 1.0;
    return make_profile(params.s).kappa();
}

Nonlinearity RunConfig::nonlinearity() const {
    return builtin_nonlinearity(nonlinearity_label, nonlinearity_p, params.T);
}

RunConfig load_run_config(const ConfigFile& cfg) {
    RunConfig rc;
    rc.params.N = cfg.get_int("problem", "N", 1);
    rc.params.T = cfg.get_double("problem", "T", 2.0 * M_PI);
    rc.params.s = cfg.get_double("problem", "s", 0.5);
    rc.params.m = cfg.get_double("problem", "m", 1.0);
    rc.params.K = cfg.get_int("problem", "K", 32);
    rc.params.M = cfg.get_int("problem", "M", 128);
    rc.kappa_mode = cfg.get("problem", "kappa_mode", "explicit");
    if (rc.kappa_mode != "explicit" && rc.kappa_mode != "normalized")
        throw ConfigError("config: problem.kappa_mode must be explicit|normalized");
    try {
        rc.params.validate();
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    rc.nonlinearity_label = cfg.get("nonlinearity", "label", "log_superlinear");
    rc.nonlinearity_p = cfg.get_double("nonlinearity", "p", 3.0);
    try {
        (void)rc.nonlinearity();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    rc.solver.cerami_tol = cfg.get_double("solver", "cerami_tol", 1e-8);
    rc.solver.max_newton = cfg.get_int("solver", "max_newton", 200);
    rc.solver.mesh_radial = cfg.get_int("solver", "mesh_radial", 40);
    rc.solver.mesh_angular = cfg.get_int("solver", "mesh_angular", 40);
    rc.solver.max_sweeps = cfg.get_int("solver", "max_sweeps", 200);
    rc.solver.trivial_floor = cfg.get_double("solver", "trivial_floor", 1e-8);
    if (!(rc.solver.cerami_tol > 0.0) || !(rc.solver.trivial_floor > 0.0))
        throw ConfigError("config: solver tolerances must be positive");
    if (rc.solver.mesh_radial < 4 || rc.solver.mesh_angular < 4)
        throw ConfigError("config: solver mesh must be at least 4x4");

    rc.schedule = cfg.get_list("continuation", "schedule");
    rc.level_tol = cfg.get_double("continuation", "level_tol", 1e-8);
    rc.residual_tol = cfg.get_double("continuation", "residual_tol", 1e-5);
    if (!(rc.level_tol > 0.0) || !(rc.residual_tol > 0.0))
        throw ConfigError("config: continuation tolerances must be positive");

    rc.out_dir = cfg.get("run", "out", "out");
    rc.seed = static_cast<std::uint64_t>(cfg.get_double("run", "seed", 12345.0));
    rc.solver.seed = rc.seed;
    rc.config_hash = cfg.hash();
    return rc;
}

}  // namespace frac
