#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frac/continuation.hpp"
#include "frac/params.hpp"

namespace frac {

// Flat INI-style run configuration: [section] headers, key = value lines,
// '#' comments. One nesting level only, diff-friendly.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    // canonical "section.key = value" lines, sorted; hashing this makes runs
    // with identical settings produce identical artifacts
    std::string canonical() const;
    std::string hash() const;  // FNV-1a 64 over canonical(), hex

private:
    std::map<std::string, std::string> values_;  // "section.key" -> value
    std::string origin_;
};

struct RunConfig {
    ProblemParams params;
    std::string nonlinearity_label = "log_superlinear";
    double nonlinearity_p = 3.0;
    std::string kappa_mode = "explicit";  // or "normalized"
    SolverConfig solver;
    std::vector<double> schedule;
    double level_tol = 1e-8;
    double residual_tol = 1e-5;
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    std::string config_hash;

    double kappa() const;            // kappa_s or 1 per kappa_mode
    Nonlinearity nonlinearity() const;
};

// ConfigError (with file/field context) on invalid input.
RunConfig load_run_config(const ConfigFile& cfg);

}  // namespace frac
