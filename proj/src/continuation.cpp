#include "frac/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "frac/errors.hpp"

namespace frac {

namespace {

// Truncated lattice sum sum_{0<|k|<=R} |k|^{-e} over Z^N plus a rigorous
// integral tail bound, so the result is an upper bound on the full sum.
double lattice_sum_upper(int N, double e, int R) {
    double acc = 0.0;
    std::vector<int> k(static_cast<std::size_t>(N), -R);
    while (true) {
        double ksq = 0.0;
        for (int d = 0; d < N; ++d) ksq += static_cast<double>(k[static_cast<std::size_t>(d)]) *
                                           k[static_cast<std::size_t>(d)];
        if (ksq > 0.0 && ksq <= static_cast<double>(R) * R) acc += std::pow(ksq, -0.5 * e);
        int d = 0;
        for (; d < N; ++d) {
            if (++k[static_cast<std::size_t>(d)] <= R) break;
            k[static_cast<std::size_t>(d)] = -R;
        }
        if (d == N) break;
    }
    // tail: each |k| > R lattice point sits in a unit cell at distance
    // >= |k| - sqrt(N)/2 from the origin
    const double surface = (N == 1) ? 2.0 : (N == 2 ? 2.0 * M_PI : 4.0 * M_PI);
    const double shift = 0.5 * std::sqrt(static_cast<double>(N));
    const double Reff = R - shift;
    const double inflate = std::pow(1.0 + shift / R, e);
    acc += inflate * surface * std::pow(Reff, N - e) / (e - N);
    return acc;
}

}  // namespace

double hy_constant(const ProblemParams& p, double q, double kappa) {
    const double crit = p.critical_exponent();
    if (!(q > 2.0) || q >= crit)
        throw DivergentSum("hy_constant: q must lie in (2, 2N/(N-2s))");
    const double qp = q / (q - 1.0);  // conjugate exponent, in (1,2)
    const double e = 2.0 * p.s * qp / (2.0 - qp);
    if (!(e > static_cast<double>(p.N)))
        throw DivergentSum("hy_constant: lattice exponent at or below the dimension");
    const int R = (p.N == 1) ? 10000 : (p.N == 2 ? 300 : 50);
    const double S = lattice_sum_upper(p.N, e, R);
    const double hy = std::pow(std::pow(p.T, -0.5 * p.N), 2.0 / qp - 1.0);
    return hy * std::pow(p.omega(), -p.s) / std::sqrt(kappa) *
           std::pow(S, (2.0 - qp) / (2.0 * qp));
}

ContinuationBounds bounds(const ProblemParams& p, const Nonlinearity& nl, double kappa) {
    ContinuationBounds b;
    b.kappa = kappa;
    const double w2s = std::pow(p.omega(), 2.0 * p.s);
    b.m0 = 0.5 * w2s;
    b.m_admissible = std::min(b.m0, p.omega() * std::pow(2.0, -0.5 / p.s));
    b.eps = w2s / 8.0;
    b.b = 0.25 - b.eps / w2s;  // = 1/8
    b.C_eps = fit_C_eps(nl, b.eps, p.N);
    b.Cpp = hy_constant(p, nl.p + 1.0, kappa);
    b.Cpp_eps = kappa * b.C_eps * std::pow(b.Cpp, nl.p + 1.0);
    if (!(b.Cpp_eps > 0.0))
        throw GeometryInfeasible("bounds: vanishing composite constant (zero nonlinearity?)");
    b.r = std::pow(b.b / (2.0 * b.Cpp_eps), 1.0 / (nl.p - 1.0));
    b.K1 = 0.5 * b.b * b.r * b.r;

    // mass-uniform cap bound at the top of the schedule range
    const ProblemParams pm0 = p.with_mass(b.m0);
    const LinkingGeometry g0 = build_geometry(pm0, nl, kappa);
    b.Cbar_m0 = g0.Cbar;
    b.A = b.Cbar_m0 / kappa;
    b.B_A = fit_B_A(nl, b.A, p.N);
    if (!std::isfinite(b.B_A))
        throw GeometryInfeasible("bounds: potential offset diverges (zero nonlinearity?)");
    b.K2 = kappa * b.B_A * std::pow(p.T, p.N);
    if (!(b.K1 > 0.0) || b.K1 > b.K2) throw GeometryInfeasible("bounds: need 0 < K1 <= K2");
    return b;
}

double nontriviality_floor(const ContinuationBounds& b, const Nonlinearity& nl,
                           const ProblemParams& p) {
    // kappa [ (T^N)^{(p-1)/(p+1)} X^2 + (p+3) C_{1/4} X^{p+1} ] = 2 K1
    const double holder = std::pow(std::pow(p.T, p.N), (nl.p - 1.0) / (nl.p + 1.0));
    const double c14 = fit_C_eps(nl, 0.25, p.N);
    const double target = 2.0 * b.K1 / b.kappa;
    auto g = [&](double X) {
        return holder * X * X + (nl.p + 3.0) * c14 * std::pow(X, nl.p + 1.0) - target;
    };
    double lo = 0.0, hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

StripReport strip_bound_check(const ExtensionField& v, double delta) {
    if (!(delta > 0.0)) throw InvalidParams("strip_bound_check: delta must be positive");
    const double s = v.profile().order();
    StripReport rep;
    rep.lhs = v.strip_mass(delta);
    rep.trace_term = std::pow(delta, 2.0 - 2.0 * s) / (1.0 - s) * l2_norm_sq(v.trace());
    rep.grad_term = delta * delta / (2.0 * s) * v.dxi_norm_sq();
    rep.slack = rep.trace_term + rep.grad_term - rep.lhs;
    rep.holds = rep.slack >= -1e-10 * (1.0 + rep.trace_term + rep.grad_term);
    return rep;
}

ContinuationReport run_continuation(const ProblemParams& p_template, const Nonlinearity& nl,
                                    double kappa, std::vector<double> schedule,
                                    const ContinuationConfig& cfg) {
    if (schedule.empty()) throw InvalidParams("run_continuation: empty schedule");
    ContinuationReport rep{bounds(p_template, nl, kappa),
                           {},
                           {},
                           FourierField(p_template.with_mass(0.0)),
                           0.0,
                           0.0,
                           0.0};
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i + 1]))
            throw InvalidParams("run_continuation: schedule must strictly decrease");
    // the level-bound chain is non-strict, so the top mass may sit at m0
    for (double m : schedule)
        if (!(m > 0.0) || m > rep.bounds.m_admissible * (1.0 + 1e-12))
            throw InvalidParams("run_continuation: schedule mass outside (0, m0]");

    auto profile = std::make_shared<const ExtensionProfile>(make_profile(p_template.s));
    std::optional<FourierField> warm;

    if (cfg.summary_csv != nullptr) {
        cfg.summary_csv->precision(17);
        (*cfg.summary_csv) << "m,alpha,residual,l2,lp1\n";
    }

    for (double m : schedule) {
        const ProblemParams pm = p_template.with_mass(m);
        Functional J(pm, nl, kappa);
        const LinkingGeometry geom =
            build_geometry(pm, nl, kappa, rep.bounds.r, rep.bounds.A);

        MinMaxResult res{FourierField(pm), 0.0, 0.0, {}, false, SolveStatus::max_iterations};
        bool have = false;
        if (cfg.warm_start && warm) {
            FourierField seed(pm);
            std::copy(warm->data(), warm->data() + warm->size(), seed.data());
            res = refine(J, seed, cfg.solver.cerami_tol, cfg.solver.max_newton,
                         cfg.solver.trivial_floor);
            have = res.converged && res.alpha >= rep.bounds.K1 - cfg.level_tol &&
                   res.alpha <= rep.bounds.K2 + cfg.level_tol;
        }
        if (!have) {
            const MinMaxResult mesh = minmax_search(J, geom, cfg.solver);
            res = refine(J, mesh.candidate, cfg.solver.cerami_tol, cfg.solver.max_newton,
                         cfg.solver.trivial_floor);
        }

        MassStep step;
        step.m = m;
        step.alpha = res.alpha;
        step.residual = res.residual;
        step.status = res.status;
        step.l2 = l2_norm(res.candidate);
        step.lp1 = trace_lq_norm(res.candidate, nl.p + 1.0);
        step.xnorm = J.xnorm(res.candidate);

        // running-norm inequalities along the branch
        const ExtensionField ext(res.candidate, profile);
        const double xsq = ext.energy_sq();
        step.grad_slack = xsq - ext.grad_norm_sq();
        step.semi_slack = std::sqrt(xsq / kappa) - gagliardo_seminorm(res.candidate);
        const double B1 = fit_B_A(nl, 1.0, pm.N);
        step.mass_slack =
            J.xnorm_sq(res.candidate) -
            2.0 * kappa * (l2_norm_sq(res.candidate) - B1 * std::pow(pm.T, pm.N));
        rep.steps.push_back(step);
        rep.fields.push_back(res.candidate);

        if (cfg.summary_csv != nullptr)
            (*cfg.summary_csv) << m << "," << step.alpha << "," << step.residual << "," << step.l2
                               << "," << step.lp1 << "\n";

        if (!res.converged)
            throw LevelOutOfBounds("run_continuation: solve did not converge at m = " +
                                   std::to_string(m) + " (" + to_string(res.status) + ")");
        if (res.alpha < rep.bounds.K1 - cfg.level_tol || res.alpha > rep.bounds.K2 + cfg.level_tol)
            throw LevelOutOfBounds("run_continuation: level " + std::to_string(res.alpha) +
                                   " outside [K1, K2] at m = " + std::to_string(m));
        warm = res.candidate;
    }

    // drive the limit equation at m = 0 from the last solution
    const ProblemParams p0 = p_template.with_mass(0.0);
    Functional J0(p0, nl, kappa);
    FourierField seed(p0);
    std::copy(warm->data(), warm->data() + warm->size(), seed.data());
    MinMaxResult limit = refine(J0, seed, cfg.residual_tol * 1e-3, cfg.solver.max_newton,
                                cfg.solver.trivial_floor);
    rep.u0 = limit.candidate;
    rep.residual0 = J0.dual_norm(J0.gradient(rep.u0));
    if (rep.residual0 > cfg.residual_tol)
        throw LevelOutOfBounds("run_continuation: limit equation residual " +
                               std::to_string(rep.residual0) + " above tolerance");
    rep.u0_lp1 = trace_lq_norm(rep.u0, nl.p + 1.0);
    rep.floor_lp1 = nontriviality_floor(rep.bounds, nl, p0);
    if (rep.u0_lp1 < rep.floor_lp1)
        throw TrivialLimit("run_continuation: limit field below the nontriviality floor");
    return rep;
}

std::string ContinuationReport::to_json() const {
    using nlohmann::json;
    json j;
    j["bounds"] = {{"m0", bounds.m0},        {"b", bounds.b},   {"eps", bounds.eps},
                   {"C_eps", bounds.C_eps},  {"Cpp", bounds.Cpp}, {"r", bounds.r},
                   {"K1", bounds.K1},        {"K2", bounds.K2}, {"Cbar_m0", bounds.Cbar_m0},
                   {"A", bounds.A},          {"B_A", bounds.B_A}, {"kappa", bounds.kappa}};
    json steps = json::array();
    for (std::size_t i = 0; i < this->steps.size(); ++i) {
        const auto& s = this->steps[i];
        json e;
        e["m"] = s.m;
        e["alpha"] = s.alpha;
        e["residual"] = s.residual;
        e["l2"] = s.l2;
        e["lp1"] = s.lp1;
        e["xnorm"] = s.xnorm;
        e["grad_slack"] = s.grad_slack;
        e["semi_slack"] = s.semi_slack;
        e["mass_slack"] = s.mass_slack;
        e["status"] = to_string(s.status);
        if (i < fields.size()) e["field"] = json::parse(field_to_json(fields[i]));
        steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    j["residual0"] = residual0;
    j["u0_lp1"] = u0_lp1;
    j["floor_lp1"] = floor_lp1;
    j["u0"] = json::parse(field_to_json(u0));
    return j.dump(2);
}

}  // namespace frac
