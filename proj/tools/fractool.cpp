// Experiment driver: reproducible runs of the spectral kernels, the
// cylinder-extension checks, the hypothesis suite, the linking solve and the
// small-mass continuation. Exit codes: 0 ok, 2 config error, 3 property
// violation, 4 solver non-convergence.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frac/config.hpp"
#include "frac/continuation.hpp"
#include "frac/cylinder.hpp"
#include "frac/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace frac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitProperty = 3;
constexpr int kExitSolver = 4;

json meta(const RunConfig& rc) {
    return json{{"config_hash", rc.config_hash},
                {"seed", rc.seed},
                {"version", kVersion},
                {"modules", kModuleVersions}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::ofstream open_csv(const fs::path& path, const RunConfig& rc) {
    std::ofstream out(path);
    out.precision(17);
    out << "# config=" << rc.config_hash << " seed=" << rc.seed << " version=" << kVersion
        << " modules=" << kModuleVersions << "\n";
    return out;
}

int cmd_describe(const RunConfig& rc) {
    const ProblemParams& p = rc.params;
    const double kappa = rc.kappa();
    std::printf("omega   = %.17g\n", p.omega());
    std::printf("kappa_s = %.17g (%s mode)\n", kappa, rc.kappa_mode.c_str());
    std::printf("m0      = %.17g\n", 0.5 * std::pow(p.omega(), 2.0 * p.s));
    if (p.m > 0.0) std::printf("C_m     = %.17g\n", coercivity_constant(p));
    const Nonlinearity nl = rc.nonlinearity();
    try {
        const LinkingGeometry g = build_geometry(p, nl, kappa);
        std::printf("r       = %.17g\n", g.r);
        std::printf("rho     = %.17g\n", g.rho);
        std::printf("b_lower = %.17g\n", g.b_lower);
    } catch (const Error& e) {
        std::printf("geometry: unavailable (%s)\n", e.what());
    }
    try {
        const ContinuationBounds b = bounds(p, nl, kappa);
        std::printf("K1      = %.17g\n", b.K1);
        std::printf("K2      = %.17g\n", b.K2);
    } catch (const Error& e) {
        std::printf("bounds: unavailable (%s)\n", e.what());
    }
    return kExitOk;
}

int cmd_verify_kernel(const RunConfig& rc, double tol) {
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    auto csv = open_csv(dir / "kappa_consistency.csv", rc);
    csv << "s,kappa_gamma,kappa_energy,kappa_dtn,spread\n";
    const double probes[] = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
    bool ok = true;
    std::vector<double> orders = {0.25, 0.5, 0.75};
    if (rc.params.s != 0.25 && rc.params.s != 0.5 && rc.params.s != 0.75)
        orders.push_back(rc.params.s);
    std::vector<double> xis;
    for (double xi = 0.0; xi <= 20.0; xi += 0.05) xis.push_back(xi);
    for (double s : orders) {
        const ExtensionProfile prof = make_profile(s);
        const double kg = prof.kappa();
        const double ke = prof.energies().total();
        const double kd = prof.dtn_limit(probes);
        const double spread = (std::max({kg, ke, kd}) - std::min({kg, ke, kd})) / kg;
        csv << s << "," << kg << "," << ke << "," << kd << "," << spread << "\n";
        std::printf("s=%.3f kappa: gamma=%.12g energy=%.12g dtn=%.12g spread=%.3g\n", s, kg, ke,
                    kd, spread);
        if (spread > tol) ok = false;
        char name[64];
        std::snprintf(name, sizeof(name), "profile_s%.3f.csv", s);
        std::ofstream table(dir / name);
        table << "# config=" << rc.config_hash << "\n";
        prof.write_table_csv(table, xis);
    }
    if (!ok) std::fprintf(stderr, "verify-kernel: kappa spread above %.3g\n", tol);
    return ok ? kExitOk : kExitProperty;
}

int cmd_verify_dtn(const RunConfig& rc, double tol) {
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    auto csv = open_csv(dir / "dtn_convergence.csv", rc);
    csv << "J,lambda,s,symbol,error,order\n";
    const std::vector<int> Js = {64, 128, 256, 512};
    bool ok = true;
    for (double s : {0.25, 0.5, 0.75}) {
        for (double lam : {1.0, 2.0, 5.0}) {
            const auto rows = convergence_study(lam, s, 30.0 / lam, Js);
            for (const auto& r : rows)
                csv << r.J << "," << r.lambda << "," << r.s << "," << r.symbol << "," << r.error
                    << "," << r.order << "\n";
            for (std::size_t i = 1; i < rows.size(); ++i)
                if (rows[i].error >= rows[i - 1].error) ok = false;
            const double err256 = rows[2].error;
            std::printf("s=%.2f lambda=%.1f: J=256 error %.4g\n", s, lam, err256);
            if (err256 > tol) ok = false;
        }
    }
    if (!ok) std::fprintf(stderr, "verify-dtn: recovery outside tolerance %.3g\n", tol);
    return ok ? kExitOk : kExitProperty;
}

int cmd_check_hypotheses(const RunConfig& rc) {
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    const Nonlinearity nl = rc.nonlinearity();
    SamplerConfig scfg;
    scfg.N = rc.params.N;
    scfg.seed = rc.seed;
    const HypothesisReport rep = check_hypotheses(nl, scfg);
    json j = json::parse(rep.to_json());
    j["meta"] = meta(rc);
    write_text(dir / ("hypotheses_" + nl.label + ".json"), j.dump(2));
    std::printf("hypotheses %s: %s; AR %s\n", nl.label.c_str(), rep.all_pass() ? "pass" : "FAIL",
                rep.ar.holds ? "holds" : "fails (superlinear without AR)");
    return rep.all_pass() ? kExitOk : kExitProperty;
}

json solution_json(const RunConfig& rc, const SolveOutcome& out) {
    json j;
    j["meta"] = meta(rc);
    j["geometry"] = {{"r", out.geometry.r},
                     {"rho", out.geometry.rho},
                     {"b_lower", out.geometry.b_lower},
                     {"C_m", out.geometry.C_m},
                     {"Cbar", out.geometry.Cbar},
                     {"degenerate_cap", out.geometry.degenerate_cap}};
    j["alpha"] = out.refined.alpha;
    j["residual"] = out.refined.residual;
    j["converged"] = out.refined.converged;
    j["status"] = to_string(out.refined.status);
    j["field"] = json::parse(field_to_json(out.refined.candidate));
    return j;
}

int cmd_solve(const RunConfig& rc) {
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    const Nonlinearity nl = rc.nonlinearity();
    auto trace = open_csv(dir / "solve_trace.csv", rc);
    trace << "iteration,level,residual\n";
    SolverConfig scfg = rc.solver;
    scfg.trace = &trace;
    SolveOutcome out = solve_linking(rc.params, nl, rc.kappa(), scfg);
    write_text(dir / "solution.json", solution_json(rc, out).dump(2));
    std::printf("solve: status=%s alpha=%.10g residual=%.3g |u|_H=%.6g\n",
                to_string(out.refined.status), out.refined.alpha, out.refined.residual,
                hs_norm(out.refined.candidate));
    if (out.refined.converged) return kExitOk;
    std::fprintf(stderr, "solve: %s\n", to_string(out.refined.status));
    return kExitSolver;
}

int cmd_continue(const RunConfig& rc) {
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    const Nonlinearity nl = rc.nonlinearity();
    std::vector<double> schedule = rc.schedule;
    if (schedule.empty()) {
        // default: 2^{-1}, ..., 2^{-6}, below m0 at omega = 1, s = 1/2
        for (int k = 1; k <= 6; ++k) schedule.push_back(std::pow(2.0, -k));
    }
    ContinuationConfig ccfg;
    ccfg.solver = rc.solver;
    ccfg.level_tol = rc.level_tol;
    ccfg.residual_tol = rc.residual_tol;
    auto csv = open_csv(dir / "continuation_summary.csv", rc);
    ccfg.summary_csv = &csv;
    try {
        const ContinuationReport rep = run_continuation(rc.params, nl, rc.kappa(), schedule, ccfg);
        json j = json::parse(rep.to_json());
        j["meta"] = meta(rc);
        write_text(dir / "continuation_report.json", j.dump(2));
        std::printf("continue: %zu masses in [K1,K2]=[%.6g,%.6g], residual0=%.3g, "
                    "|u0|_{p+1}=%.6g >= floor %.6g\n",
                    rep.steps.size(), rep.bounds.K1, rep.bounds.K2, rep.residual0, rep.u0_lp1,
                    rep.floor_lp1);
        return kExitOk;
    } catch (const LevelOutOfBounds& e) {
        std::fprintf(stderr, "continue: %s\n", e.what());
        return kExitProperty;
    } catch (const TrivialLimit& e) {
        std::fprintf(stderr, "continue: %s\n", e.what());
        return kExitProperty;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic fractional-operator toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the verb

    std::string config_path;
    std::string out_override;
    double tol_override = -1.0;
    std::int64_t seed_override = -1;
    app.add_option("--config", config_path, "run configuration file (INI)");
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--seed", seed_override, "seed override");
    app.add_option("--tol", tol_override, "tolerance override for verify verbs");

    auto* describe = app.add_subcommand("describe", "print derived constants, no solves");
    auto* vkernel = app.add_subcommand("verify-kernel", "kappa three-way consistency");
    auto* vdtn = app.add_subcommand("verify-dtn", "finite-difference symbol recovery");
    auto* hyp = app.add_subcommand("check-hypotheses", "nonlinearity hypothesis suite");
    auto* solve = app.add_subcommand("solve", "linking min-max solve");
    auto* cont = app.add_subcommand("continue", "small-mass continuation");
    auto* all = app.add_subcommand("all", "every verb in sequence");

    CLI11_PARSE(app, argc, argv);

    RunConfig rc;
    try {
        const ConfigFile cfg = config_path.empty() ? ConfigFile::parse_text("", "<default>")
                                                   : ConfigFile::parse_file(config_path);
        rc = load_run_config(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    if (!out_override.empty()) rc.out_dir = out_override;
    if (seed_override >= 0) {
        rc.seed = static_cast<std::uint64_t>(seed_override);
        rc.solver.seed = rc.seed;
    }

    try {
        if (describe->parsed()) return cmd_describe(rc);
        if (vkernel->parsed()) return cmd_verify_kernel(rc, tol_override > 0 ? tol_override : 1e-6);
        if (vdtn->parsed()) return cmd_verify_dtn(rc, tol_override > 0 ? tol_override : 0.02);
        if (hyp->parsed()) return cmd_check_hypotheses(rc);
        if (solve->parsed()) return cmd_solve(rc);
        if (cont->parsed()) return cmd_continue(rc);
        if (all->parsed()) {
            int code = cmd_verify_kernel(rc, tol_override > 0 ? tol_override : 1e-6);
            if (code != kExitOk) return code;
            code = cmd_verify_dtn(rc, tol_override > 0 ? tol_override : 0.02);
            if (code != kExitOk) return code;
            code = cmd_check_hypotheses(rc);
            if (code != kExitOk) return code;
            code = cmd_solve(rc);
            if (code != kExitOk) return code;
            return cmd_continue(rc);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const LevelOutOfBounds& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitProperty;
    } catch (const TrivialLimit& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitProperty;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}
