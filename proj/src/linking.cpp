#include "frac/linking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "frac/continuation.hpp"
#include "frac/errors.hpp"
#include "frac/kernels.hpp"
#include "frac/linalg.hpp"

namespace frac {

std::pair<FourierField, FourierField> split(const FourierField& u) {
    const ProblemParams& p = u.params();
    FourierField y(p, u.hermitian()), z = u;
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    const std::size_t i0 = u.flat_index(zero);
    y.data()[i0] = u.data()[i0];
    z.data()[i0] = cdouble{0.0, 0.0};
    return {std::move(y), std::move(z)};
}

double coercivity_constant(const ProblemParams& p) {
    if (!(p.m > 0.0)) throw InvalidParams("coercivity_constant: needs m > 0");
    const double w = p.omega();
    return 1.0 - p.mass_shift() / std::pow(w * w + p.m * p.m, p.s);
}

double coercivity_minimized(const ProblemParams& p, Rng& rng, int iters) {
    FourierField u = random_real_field(p, rng, -1, /*zero_mean=*/true);
    const std::vector<double> sym = symbol_table(p, false);
    const double shift = p.mass_shift();
    // inverse iteration on the diagonal quotient (1 - shift/symbol)
    for (int it = 0; it < iters; ++it) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (u.ksq(i) == 0.0) continue;
            u.data()[i] /= (1.0 - shift / sym[i]);
            nrm += std::norm(u.data()[i]);
        }
        const double scale = 1.0 / std::sqrt(nrm);
        u *= scale;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double c2 = std::norm(u.data()[i]);
        num += (sym[i] - shift) * c2;
        den += sym[i] * c2;
    }
    return num / den;
}

namespace {

double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

FourierField sine_product_trace(const ProblemParams& p) {
    // prod_i sin(omega x_i) = (2i)^{-N} sum_{sigma in {+-1}^N} (prod sigma_i) e^{i omega sigma.x}
    FourierField w(p);
    const double rootTN = std::sqrt(std::pow(p.T, p.N));
    // (2i)^{-N} = 2^{-N} (-i)^N
    cdouble phase{1.0, 0.0};
    for (int d = 0; d < p.N; ++d) phase *= cdouble{0.0, -1.0};
    const cdouble pref = phase * std::pow(0.5, p.N) * rootTN;
    std::vector<int> k(static_cast<std::size_t>(p.N));
    for (std::size_t mask = 0; mask < (std::size_t{1} << p.N); ++mask) {
        double sgn = 1.0;
        for (int d = 0; d < p.N; ++d) {
            const bool neg = (mask >> d) & 1u;
            k[static_cast<std::size_t>(d)] = neg ? -1 : 1;
            if (neg) sgn = -sgn;
        }
        w.set_coeff(k, pref * sgn);
    }
    return w;
}

}  // namespace

FourierField LinkingGeometry::plane_trace(double eta, double zeta) const {
    FourierField u(params);
    std::vector<int> zero(static_cast<std::size_t>(params.N), 0);
    u.set_coeff(zero, cdouble{eta * y_unit_c0, 0.0});
    u.add_scaled(w_trace, zeta / std::sqrt(w_xnorm_sq));
    return u;
}

double LinkingGeometry::plane_zperp(double zeta) const {
    return zeta * w_perp / std::sqrt(w_xnorm_sq);
}

LinkingGeometry build_geometry(const ProblemParams& p, const Nonlinearity& nl, double kappa,
                               std::optional<double> r_override,
                               std::optional<double> A_override) {
    p.validate();
    if (!(p.m > 0.0)) throw InvalidParams("build_geometry: needs m > 0");
    LinkingGeometry g{.params = p, .kappa = kappa, .w_trace = FourierField(p)};

    g.C_m = coercivity_constant(p);

    // ||w||^2 = (T/2)^N [ N omega^2 I2 + I4 + m^2 I2 ],
    // I2 = int xi^{1-2s}/(1+xi)^2 = B(2-2s, 2s), I4 = B(2-2s, 2+2s)
    const double I2 = beta_fn(2.0 - 2.0 * p.s, 2.0 * p.s);
    const double I4 = beta_fn(2.0 - 2.0 * p.s, 2.0 + 2.0 * p.s);
    const double w = p.omega();
    g.C2 = p.N * w * w * I2 + I4;
    g.C3 = I2;
    g.C1 = g.C2;
    g.Cbar = std::max(kappa * p.mass_shift(), 1.0) * std::max(1.0, g.C2 + p.m * p.m * g.C3);

    g.w_trace = sine_product_trace(p);
    g.w_trace_l2_sq = std::pow(0.5 * p.T, p.N);
    g.w_trace_hs_sq = std::pow(w * w * p.N + p.m * p.m, p.s) * g.w_trace_l2_sq;
    g.w_xnorm_sq = g.w_trace_l2_sq * (g.C2 + p.m * p.m * g.C3);
    const double perp_sq = g.w_xnorm_sq - kappa * g.w_trace_hs_sq;
    if (perp_sq <= 0.0)
        throw GeometryInfeasible("build_geometry: test function below the harmonic energy");
    g.w_perp = std::sqrt(perp_sq);
    g.y_unit_c0 = 1.0 / std::sqrt(kappa * p.mass_shift());

    // sphere radius from the certified lower bound
    //   J >= (C_m/2 - eps m^{-2s}) r^2 - kappa C_eps Cpp^{p+1} r^{p+1}
    g.eps = p.mass_shift() * g.C_m / 4.0;
    g.C_eps = fit_C_eps(nl, g.eps, p.N);
    g.Cpp = hy_constant(p, nl.p + 1.0, kappa);
    const double c2 = g.C_m / 4.0;
    const double cp = kappa * g.C_eps * std::pow(g.Cpp, nl.p + 1.0);
    if (!(c2 > 0.0)) throw GeometryInfeasible("build_geometry: no positive quadratic coefficient");
    double r = 0.95;
    if (cp > 0.0) {
        const double rstar = std::pow(2.0 * c2 / ((nl.p + 1.0) * cp), 1.0 / (nl.p - 1.0));
        r = std::min(rstar, 0.95);
    }
    if (r_override) r = *r_override;
    g.r = r;
    g.b_lower = c2 * r * r - cp * std::pow(r, nl.p + 1.0);
    if (!(g.b_lower > 0.0))
        throw GeometryInfeasible("build_geometry: sphere radius yields no positive lower bound");

    // cap radius: J <= (1/2 - kappa A / Cbar) ||v||^2 + kappa B_A T^N on the plane
    g.A = A_override ? *A_override : g.Cbar / kappa;
    if (!(g.A > 0.5 * g.Cbar / kappa))
        throw GeometryInfeasible("build_geometry: potential slope below the cap threshold");
    g.B_A = fit_B_A(nl, g.A, p.N);
    if (!std::isfinite(g.B_A)) {
        g.degenerate_cap = true;
        g.rho = std::max(2.0, 2.0 * g.r);
    } else {
        const double denom = kappa * g.A / g.Cbar - 0.5;
        const double rho0 = std::sqrt(kappa * g.B_A * std::pow(p.T, p.N) / denom);
        g.rho = std::max({2.0 * rho0, 2.0, 2.0 * g.r});
    }
    return g;
}

double geometry_value(const Functional& J, const LinkingGeometry& g, double eta, double zeta) {
    const FourierField u = g.plane_trace(eta, zeta);
    const double zp = g.plane_zperp(zeta);
    return J.value(u) + 0.5 * zp * zp;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged:
            return "converged";
        case SolveStatus::converged_to_trivial:
            return "converged_to_trivial";
        case SolveStatus::max_iterations:
            return "max_iterations";
        case SolveStatus::stagnation:
            return "stagnation";
        case SolveStatus::degenerate_geometry:
            return "degenerate_geometry";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// mesh relaxation + local min-max extraction
//
// Node-wise descent alone cannot track the linking level: every node slides
// off the ridge into a valley and the node-max collapses, while the ridge
// crossing survives only inside stretched edges of the piecewise-linear
// surface. The level is therefore measured over nodes plus edge-interior
// samples, and the best crossing point seeds a local min-max stage: maximize
// over the 2-plane spanned by the constant direction and a zero-mean
// direction v, then push v downhill transversally. The reported level is the
// running minimum over the surfaces/planes seen, which is nonincreasing by
// construction.

namespace {

struct MeshNode {
    FourierField u;
    double zperp = 0.0;
    bool pinned = false;
    double step = 0.2;
    double level = 0.0;
};

struct SurfacePoint {
    FourierField u;
    double zperp = 0.0;
    double level = 0.0;
};

// 2-plane maximization: phi(a, lambda) = J(a yhat + lambda v), lambda >= 0.
// v is zero-mean; yhat is the unit harmonic constant. Newton ascent with a
// gradient fallback, seeded from (a0, l0).
struct PlaneMax {
    double a = 0.0, lambda = 0.0, value = 0.0;
    bool ok = false;
};

FourierField plane_point(const ProblemParams& p, double y_unit_c0, const FourierField& v, double a,
                         double lambda) {
    FourierField u = v;
    u *= lambda;
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    u.set_coeff(zero, cdouble{a * y_unit_c0, 0.0});
    return u;
}

PlaneMax maximize_plane(const Functional& J, double y_unit_c0, const FourierField& v, double a0,
                        double l0, double span_cap) {
    const ProblemParams& p = J.params();
    FourierField yhat(p);
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    yhat.set_coeff(zero, cdouble{y_unit_c0, 0.0});

    PlaneMax best;
    best.a = a0;
    best.lambda = std::max(l0, 1e-8);
    best.value = J.value(plane_point(p, y_unit_c0, v, best.a, best.lambda));

    for (int it = 0; it < 80; ++it) {
        const FourierField u = plane_point(p, y_unit_c0, v, best.a, best.lambda);
        const FourierField g = J.gradient(u);
        const double ga = Functional::inner_l2(g, yhat);
        const double gl = Functional::inner_l2(g, v);
        const double gn = std::hypot(ga, gl);
        if (gn < 1e-12 * (1.0 + std::abs(best.value))) break;

        // 2x2 second derivative via two directional applications
        const std::vector<double> uvals = J.padded_values(u);
        const FourierField Hy = J.hessian_apply_cached(uvals, yhat);
        const FourierField Hv = J.hessian_apply_cached(uvals, v);
        const double haa = Functional::inner_l2(Hy, yhat);
        const double hal = Functional::inner_l2(Hy, v);
        const double hll = Functional::inner_l2(Hv, v);
        const double det = haa * hll - hal * hal;

        double da, dl;
        if (det > 0.0 && haa < 0.0) {  // negative definite: Newton ascent
            da = -(hll * ga - hal * gl) / det;
            dl = -(haa * gl - hal * ga) / det;
        } else {  // gradient ascent
            da = ga / (1.0 + gn);
            dl = gl / (1.0 + gn);
        }
        double tau = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            const double an = best.a + tau * da;
            const double ln = std::max(best.lambda + tau * dl, 0.0);
            if (std::abs(an) < span_cap && ln < span_cap) {
                const double val = J.value(plane_point(p, y_unit_c0, v, an, ln));
                if (val > best.value + 1e-15) {
                    best.a = an;
                    best.lambda = ln;
                    best.value = val;
                    moved = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if (!moved) break;
    }
    best.ok = best.lambda > 1e-10 && std::abs(best.a) < span_cap && best.lambda < span_cap;
    return best;
}

}  // namespace

MinMaxResult minmax_search(const Functional& J, const LinkingGeometry& geom,
                           const SolverConfig& cfg) {
    const ProblemParams& p = J.params();
    const std::vector<double> sym = symbol_table(p, false);
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    const std::size_t i0 = FourierField(p).flat_index(zero);

    const int nr = cfg.mesh_radial, nphi = cfg.mesh_angular;
    std::vector<MeshNode> nodes;
    nodes.reserve(static_cast<std::size_t>((nr + 1) * (nphi + 1)));
    for (int i = 0; i <= nr; ++i) {
        // quadratic grading keeps resolution near the small-amplitude region
        const double t = geom.rho * std::pow(static_cast<double>(i) / nr, 2.0);
        for (int j = 0; j <= nphi; ++j) {
            const double phi = M_PI * static_cast<double>(j) / nphi;
            const double eta = t * std::cos(phi);
            const double zeta = t * std::sin(phi);
            MeshNode n{geom.plane_trace(eta, zeta), geom.plane_zperp(zeta),
                       i == 0 || i == nr || j == 0 || j == nphi, 0.2, 0.0};
            n.level = J.value(n.u) + 0.5 * n.zperp * n.zperp;
            nodes.push_back(std::move(n));
        }
    }
    const auto at = [&](int i, int j) -> MeshNode& {
        return nodes[static_cast<std::size_t>(i) * (nphi + 1) + j];
    };

    double pinned_max = -std::numeric_limits<double>::infinity();
    for (const auto& n : nodes)
        if (n.pinned) pinned_max = std::max(pinned_max, n.level);

    MinMaxResult out{FourierField(p), 0.0, 0.0, {}, false, SolveStatus::max_iterations};
    const bool degenerate = geom.degenerate_cap || pinned_max >= geom.b_lower;

    // running best surface: max over nodes and edge-interior maxima. Edges
    // stretch enormously once nodes settle into valleys, so each edge is
    // maximized (coarse scan + golden refinement), not just sampled.
    SurfacePoint best{FourierField(p), 0.0, std::numeric_limits<double>::infinity()};
    auto edge_value = [&](const MeshNode& a, const MeshNode& b, double t) {
        FourierField u = a.u;
        u *= (1.0 - t);
        u.add_scaled(b.u, t);
        const double zp = (1.0 - t) * a.zperp + t * b.zperp;
        return std::pair<FourierField, double>{std::move(u), zp};
    };
    auto measure_surface = [&]() {
        SurfacePoint top{FourierField(p), 0.0, -std::numeric_limits<double>::infinity()};
        for (const auto& n : nodes) {
            if (n.level > top.level) top = SurfacePoint{n.u, n.zperp, n.level};
        }
        auto probe_edge = [&](const MeshNode& a, const MeshNode& b) {
            double tb = 0.0, vb = a.level;
            if (b.level > vb) {
                tb = 1.0;
                vb = b.level;
            }
            for (int q = 1; q <= 11; ++q) {
                const double t = q / 12.0;
                auto [u, zp] = edge_value(a, b, t);
                const double val = J.value(u) + 0.5 * zp * zp;
                if (val > vb) {
                    vb = val;
                    tb = t;
                }
            }
            // golden refinement around the best sample
            double lo = std::max(0.0, tb - 1.0 / 12.0), hi = std::min(1.0, tb + 1.0 / 12.0);
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            auto val_at = [&](double t) {
                auto [u, zp] = edge_value(a, b, t);
                return J.value(u) + 0.5 * zp * zp;
            };
            double f1 = val_at(x1), f2 = val_at(x2);
            for (int it = 0; it < 20; ++it) {
                if (f1 > f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = val_at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = val_at(x2);
                }
            }
            const double tbest = 0.5 * (lo + hi);
            auto [u, zp] = edge_value(a, b, tbest);
            const double val = J.value(u) + 0.5 * zp * zp;
            if (val > top.level) top = SurfacePoint{std::move(u), zp, val};
            else if (vb > top.level) {
                auto [u2, zp2] = edge_value(a, b, tb);
                top = SurfacePoint{std::move(u2), zp2, vb};
            }
        };
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j <= nphi; ++j) probe_edge(at(i, j), at(i + 1, j));
        for (int i = 0; i <= nr; ++i)
            for (int j = 0; j < nphi; ++j) probe_edge(at(i, j), at(i, j + 1));
        if (top.level < best.level) best = top;
        return top.level;
    };
    measure_surface();

    // The level history keeps only sound upper bounds: the pristine initial
    // surface (measured above, before any tearing) and the plane maxima of
    // the local min-max stage below. Node levels steer the sweeps and the
    // plateau exit; the post-relaxation measurement only selects the seed.
    out.path_history.emplace_back(0, best.level);
    if (cfg.trace != nullptr) (*cfg.trace) << 0 << "," << best.level << ",\n";

    int sweep = 0;
    double node_max_prev = std::numeric_limits<double>::infinity();
    int flat = 0;
    for (; sweep < cfg.max_sweeps; ++sweep) {
        for (auto& n : nodes) {
            if (n.pinned) continue;
            const FourierField g = J.gradient(n.u);
            FourierField dir = g;
            for (std::size_t i = 0; i < dir.size(); ++i) dir.data()[i] /= sym[i];
            double tau = n.step;
            bool accepted = false;
            for (int bt = 0; bt < 30; ++bt) {
                FourierField trial = n.u;
                trial.add_scaled(dir, -tau);
                const double tz = (1.0 - std::min(tau, 1.0)) * n.zperp;
                const double val = J.value(trial) + 0.5 * tz * tz;
                if (val < n.level) {
                    n.u = std::move(trial);
                    n.zperp = tz;
                    n.level = val;
                    n.step = (bt == 0) ? std::min(tau * 1.5, 10.0) : tau;
                    accepted = true;
                    break;
                }
                tau *= 0.5;
            }
            if (!accepted) n.step = std::max(n.step * 0.5, 1e-12);
        }
        double node_max = -std::numeric_limits<double>::infinity();
        for (const auto& n : nodes)
            if (!n.pinned) node_max = std::max(node_max, n.level);
        if (std::abs(node_max - node_max_prev) <= cfg.plateau_rel * (1.0 + std::abs(node_max))) {
            if (++flat >= cfg.plateau_window) break;
        } else {
            flat = 0;
            node_max_prev = node_max;
        }
    }
    measure_surface();

    if (degenerate) {
        out.candidate = best.u;
        out.alpha = best.level;
        out.residual = (1.0 + J.xnorm(best.u)) * J.dual_norm(J.gradient(best.u));
        out.status = SolveStatus::degenerate_geometry;
        return out;
    }

    // Local min-max from the best crossing point: v is its normalized
    // zero-mean part (falling back to the test direction when the surface
    // collapsed), maximize over span{yhat, v}, then push v downhill
    // transversally. The recorded level is the running minimum of the
    // accepted plane maxima.
    FourierField v = best.u;
    v.data()[i0] = cdouble{0.0, 0.0};
    double vnorm = std::sqrt(J.xnorm_sq(v));
    if (!(vnorm > 1e-6 * geom.r)) {
        v = geom.w_trace;
        vnorm = std::sqrt(J.xnorm_sq(v));
    }
    v *= 1.0 / vnorm;
    const double span_cap = 50.0 * std::max(geom.rho, 1.0);

    // seed the plane coefficients from a scan along v (the sphere radius is
    // the natural scale where the level is positive)
    double l_seed = geom.r, seed_val = -std::numeric_limits<double>::infinity();
    for (double lam = 0.25 * geom.r; lam < span_cap; lam *= 1.4) {
        const double val = J.value(plane_point(p, geom.y_unit_c0, v, 0.0, lam));
        if (val > seed_val) {
            seed_val = val;
            l_seed = lam;
        }
    }

    PlaneMax pm = maximize_plane(J, geom.y_unit_c0, v, 0.0, l_seed, span_cap);
    double level_run = std::min(best.level, pm.value);
    FourierField ustar = plane_point(p, geom.y_unit_c0, v, pm.a, pm.lambda);
    double tau = 0.5;
    for (int outer = 0; outer < 50 * cfg.max_sweeps && pm.ok; ++outer) {
        const FourierField g = J.gradient(ustar);
        const double resid = (1.0 + J.xnorm(ustar)) * J.dual_norm(g);
        out.path_history.emplace_back(1 + outer, level_run);
        if (cfg.trace != nullptr)
            (*cfg.trace) << 1 + outer << "," << level_run << "," << resid << "\n";
        if (resid < 1e-4 && pm.value > 0.5 * geom.b_lower) break;

        FourierField dir = g;
        dir.data()[i0] = cdouble{0.0, 0.0};  // transverse part lives in the zero-mean space
        for (std::size_t i = 0; i < dir.size(); ++i) dir.data()[i] /= sym[i];
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            FourierField vt = v;
            vt.add_scaled(dir, -tau / std::max(pm.lambda, 1e-8));
            vt *= 1.0 / std::sqrt(J.xnorm_sq(vt));
            const PlaneMax trial =
                maximize_plane(J, geom.y_unit_c0, vt, pm.a, pm.lambda, span_cap);
            if (trial.ok && trial.value < pm.value - 1e-15) {
                v = std::move(vt);
                pm = trial;
                ustar = plane_point(p, geom.y_unit_c0, v, pm.a, pm.lambda);
                level_run = std::min(level_run, pm.value);
                if (bt == 0) tau = std::min(tau * 1.5, 5.0);
                moved = true;
                break;
            }
            tau *= 0.5;
        }
        if (!moved) break;  // plane max is locally stationary; Newton takes over
    }

    out.candidate = ustar;
    out.alpha = J.value(ustar);
    out.residual = (1.0 + J.xnorm(ustar)) * J.dual_norm(J.gradient(ustar));
    out.status = SolveStatus::max_iterations;  // handed to refine
    return out;
}

// ---------------------------------------------------------------------------
// Newton polish

namespace {

// Real coordinates of a Hermitian coefficient field: one dof for the mean
// mode, (re, im) for one member of every conjugate pair.
class RealDofMap {
public:
    explicit RealDofMap(const FourierField& probe) {
        const ProblemParams& p = probe.params();
        int k[4], kneg[4];
        for (std::size_t i = 0; i < probe.size(); ++i) {
            probe.unflatten(i, k);
            for (int d = 0; d < p.N; ++d) kneg[d] = -k[d];
            const std::size_t j = probe.flat_index(std::span<const int>(kneg, p.N));
            if (i == j)
                self_.push_back(i);
            else if (i < j)
                pairs_.emplace_back(i, j);
        }
        dof_ = self_.size() + 2 * pairs_.size();
    }

    std::size_t dof() const { return dof_; }

    void to_dofs(const FourierField& u, double* out) const {
        std::size_t q = 0;
        for (std::size_t i : self_) out[q++] = u.data()[i].real();
        for (const auto& [i, j] : pairs_) {
            out[q++] = u.data()[i].real();
            out[q++] = u.data()[i].imag();
        }
    }

    void from_dofs(const double* in, FourierField& u) const {
        std::size_t q = 0;
        for (std::size_t i : self_) u.data()[i] = cdouble{in[q++], 0.0};
        for (const auto& [i, j] : pairs_) {
            const double re = in[q++], im = in[q++];
            u.data()[i] = cdouble{re, im};
            u.data()[j] = cdouble{re, -im};
        }
    }

    // diagonal of the preconditioner in dof coordinates
    void weights(const std::vector<double>& table, double* out) const {
        std::size_t q = 0;
        for (std::size_t i : self_) out[q++] = table[i];
        for (const auto& [i, j] : pairs_) {
            out[q++] = table[i];
            out[q++] = table[i];
        }
    }

private:
    std::vector<std::size_t> self_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::size_t dof_ = 0;
};

}  // namespace

MinMaxResult refine(const Functional& J, FourierField candidate, double tol, int max_iter,
                    double trivial_floor, std::ostream* trace) {
    const ProblemParams& p = J.params();
    const RealDofMap map(candidate);
    const int n = static_cast<int>(map.dof());
    const std::vector<double> sym = symbol_table(p, false);
    std::vector<double> diag(map.dof());
    map.weights(sym, diag.data());

    MinMaxResult out{candidate, 0.0, 0.0, {}, false, SolveStatus::max_iterations};
    double mu = 0.0;

    for (int iter = 0; iter <= max_iter; ++iter) {
        FourierField g = J.gradient(out.candidate);
        const double level = J.value(out.candidate);
        const double resid = (1.0 + J.xnorm(out.candidate)) * J.dual_norm(g);
        out.alpha = level;
        out.residual = resid;
        out.path_history.emplace_back(iter, level);
        if (trace != nullptr) (*trace) << iter << "," << level << "," << resid << "\n";

        if (hs_norm(out.candidate) < trivial_floor) {
            out.status = SolveStatus::converged_to_trivial;
            return out;
        }
        if (resid < tol) {
            out.converged = true;
            out.status = SolveStatus::converged;
            return out;
        }
        if (iter == max_iter) break;

        // assemble the dof-space second derivative at the current point
        const std::vector<double> uvals = J.padded_values(out.candidate);
        std::vector<double> H(static_cast<std::size_t>(n) * n);
        std::vector<double> basis(map.dof(), 0.0), col(map.dof());
        FourierField e(p), He(p);
        for (int c = 0; c < n; ++c) {
            basis[static_cast<std::size_t>(c)] = 1.0;
            map.from_dofs(basis.data(), e);
            basis[static_cast<std::size_t>(c)] = 0.0;
            He = J.hessian_apply_cached(uvals, e);
            map.to_dofs(He, col.data());
            for (int r = 0; r < n; ++r) H[static_cast<std::size_t>(r) * n + c] = col[static_cast<std::size_t>(r)];
        }

        const double phi0 = J.dual_norm(g);
        bool stepped = false;
        for (int escalate = 0; escalate < 10 && !stepped; ++escalate) {
            std::vector<double> A = H;
            std::vector<double> rhs(map.dof());
            map.to_dofs(g, rhs.data());
            for (auto& v : rhs) v = -v;
            if (mu > 0.0)
                for (int d = 0; d < n; ++d)
                    A[static_cast<std::size_t>(d) * n + d] += mu * diag[static_cast<std::size_t>(d)];
            if (!lu_solve(A, rhs, n)) {
                mu = std::max(mu * 10.0, 1e-8);
                continue;
            }
            FourierField delta(p);
            map.from_dofs(rhs.data(), delta);
            double tau = 1.0;
            for (int bt = 0; bt < 40; ++bt) {
                FourierField trial = out.candidate;
                trial.add_scaled(delta, tau);
                const double phi = J.dual_norm(J.gradient(trial));
                if (phi < (1.0 - 1e-4 * tau) * phi0) {
                    out.candidate = std::move(trial);
                    stepped = true;
                    mu *= 0.25;
                    if (mu < 1e-14) mu = 0.0;
                    break;
                }
                tau *= 0.5;
            }
            if (!stepped) mu = std::max(mu * 10.0, 1e-8);
        }
        if (!stepped) {
            out.status = SolveStatus::stagnation;
            return out;
        }
    }
    out.status = SolveStatus::max_iterations;
    return out;
}

SolveOutcome solve_linking(const ProblemParams& p, const Nonlinearity& nl, double kappa,
                           const SolverConfig& cfg) {
    SolveOutcome o{build_geometry(p, nl, kappa),
                   MinMaxResult{FourierField(p), 0.0, 0.0, {}, false, SolveStatus::max_iterations},
                   MinMaxResult{FourierField(p), 0.0, 0.0, {}, false, SolveStatus::max_iterations}};
    Functional J(p, nl, kappa);
    o.mesh = minmax_search(J, o.geometry, cfg);
    o.refined = refine(J, o.mesh.candidate, cfg.cerami_tol, cfg.max_newton, cfg.trivial_floor,
                       cfg.trace);
    if (o.mesh.status == SolveStatus::degenerate_geometry &&
        o.refined.status == SolveStatus::converged &&
        hs_norm(o.refined.candidate) < 10.0 * cfg.trivial_floor)
        o.refined.status = SolveStatus::converged_to_trivial;
    if (o.refined.converged && o.refined.alpha < o.geometry.b_lower - cfg.cerami_tol &&
        o.mesh.status != SolveStatus::degenerate_geometry) {
        // a converged point below the linking level is not the sought one
        o.refined.converged = false;
        o.refined.status = SolveStatus::stagnation;
    }
    return o;
}

}  // namespace frac
