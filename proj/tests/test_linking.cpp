#include <doctest.h>

#include <cmath>

#include "frac/continuation.hpp"
#include "frac/errors.hpp"
#include "frac/linking.hpp"
#include "frac/quadrature.hpp"

using namespace frac;

namespace {

ProblemParams params1d(int K = 16, int M = 64) {
    ProblemParams p;
    p.N = 1;
    p.T = 2.0 * M_PI;
    p.s = 0.5;
    p.m = 1.0;
    p.K = K;
    p.M = M;
    return p;
}

double kappa_of(const ProblemParams& p) { return make_profile(p.s).kappa(); }

}  // namespace

TEST_CASE("split is the mean/zero-mean projection") {
    ProblemParams p = params1d();
    FourierField c(p);
    int k0[1] = {0};
    c.set_coeff(k0, cdouble{2.0, 0.0});
    auto [y, z] = split(c);
    CHECK(l2_norm(z) == 0.0);
    CHECK(y.coeff(k0) == cdouble{2.0, 0.0});

    // the product-of-sines trace is entirely zero-mean
    const LinkingGeometry g = build_geometry(p, builtin_nonlinearity("log_superlinear"), 1.0);
    auto [yw, zw] = split(g.w_trace);
    CHECK(l2_norm(yw) == 0.0);
    CHECK(l2_norm(zw) == doctest::Approx(l2_norm(g.w_trace)));

    // projection: split of each factor reproduces itself
    auto [yy, yz] = split(y);
    CHECK(l2_norm(yz) == 0.0);
    auto [zy, zz] = split(zw);
    CHECK(l2_norm(zy) == 0.0);

    // exact decomposition
    Rng rng(3);
    FourierField u = random_real_field(p, rng);
    auto [uy, uz] = split(u);
    uy += uz;
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(uy.data()[i] == u.data()[i]);
}

TEST_CASE("coercivity constant: closed forms and minimization cross-check") {
    ProblemParams p = params1d();
    // s = 1/2, omega = 1, m = 1: 1 - 1/sqrt(2)
    CHECK(coercivity_constant(p) == doctest::Approx(1.0 - M_SQRT1_2).epsilon(1e-14));

    // m -> 0+ limit is 1
    CHECK(coercivity_constant(p.with_mass(1e-12)) == doctest::Approx(1.0).epsilon(1e-5));

    Rng rng(17);
    const double sampled = coercivity_minimized(p, rng);
    CHECK(sampled == doctest::Approx(coercivity_constant(p)).epsilon(1e-6));

    // any sampled Rayleigh quotient sits above the sharp constant
    for (int trial = 0; trial < 1000; ++trial) {
        FourierField z = random_real_field(p, rng, -1, true);
        const double num = hs_norm_sq(z) - p.mass_shift() * l2_norm_sq(z);
        CHECK(num / hs_norm_sq(z) >= coercivity_constant(p) - 1e-6);
    }
}

TEST_CASE("test-function integrals against the quadrature oracle") {
    // int_0^inf xi^{1-2s}/(1+xi)^2 at s = 1/2 equals 1; closed form B(2-2s,2s).
    // xi -> 1/xi folds the slowly decaying tail onto [0,1].
    for (double s : {0.25, 0.5, 0.75}) {
        const double w = 1.0 - 2.0 * s;
        const double i2 = frac::quad::singular_lower_endpoint(
            [&](double xi) {
                return (std::pow(xi, w) + std::pow(xi, -w)) / std::pow(1.0 + xi, 2.0);
            },
            1.0, 1e-12);
        const double i4 = frac::quad::singular_lower_endpoint(
            [&](double xi) {
                return (std::pow(xi, w) + std::pow(xi, 2.0 * s + 1.0)) / std::pow(1.0 + xi, 4.0);
            },
            1.0, 1e-12);
        const double b2 = std::exp(std::lgamma(2.0 - 2.0 * s) + std::lgamma(2.0 * s));
        const double b4 =
            std::exp(std::lgamma(2.0 - 2.0 * s) + std::lgamma(2.0 + 2.0 * s) - std::lgamma(4.0));
        CHECK(i2 == doctest::Approx(b2).epsilon(1e-7));
        CHECK(i4 == doctest::Approx(b4).epsilon(1e-9));
        if (s == 0.5) CHECK(b2 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("geometry: w-norms, unit directions, radii ordering") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    const LinkingGeometry g = build_geometry(p, nl, kappa);

    CHECK(g.w_trace_l2_sq == doctest::Approx(l2_norm_sq(g.w_trace)).epsilon(1e-13));
    CHECK(g.w_trace_hs_sq == doctest::Approx(hs_norm_sq(g.w_trace)).epsilon(1e-13));
    CHECK(g.w_xnorm_sq >= kappa * g.w_trace_hs_sq);  // trace inequality for w
    CHECK(g.rho > 1.0);
    CHECK(g.r < 1.0);
    CHECK(g.r > 0.0);
    CHECK(g.b_lower > 0.0);
    CHECK_FALSE(g.degenerate_cap);

    // einstein-type bounds hold with the computed constants
    CHECK(g.C1 * g.w_trace_l2_sq <= g.w_xnorm_sq * (1.0 + 1e-12));
    CHECK(g.w_xnorm_sq <= (g.C2 + p.m * p.m * g.C3) * g.w_trace_l2_sq * (1.0 + 1e-12));

    // unit directions: ||eta y + zeta z||^2 = eta^2 + zeta^2
    Functional J(p, nl, kappa);
    const FourierField v = g.plane_trace(0.7, 1.3);
    const double zp = g.plane_zperp(1.3);
    CHECK(J.xnorm_sq(v) + zp * zp == doctest::Approx(0.7 * 0.7 + 1.3 * 1.3).epsilon(1e-10));
}

TEST_CASE("geometry separates the linking levels on samples") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    const LinkingGeometry g = build_geometry(p, nl, kappa);
    Functional J(p, nl, kappa);
    Rng rng(29);

    // J <= 0 on the flat part of the boundary (constants)
    for (int i = 0; i < 1000; ++i) {
        const double eta = rng.uniform(-g.rho, g.rho);
        CHECK(geometry_value(J, g, eta, 0.0) <= 1e-10);
    }
    // J >= b_lower on the sphere in the zero-mean subspace
    for (int i = 0; i < 1000; ++i) {
        FourierField z = random_real_field(p, rng, -1, true);
        const double scale = g.r / J.xnorm(z);
        z *= scale;
        CHECK(J.value(z) >= g.b_lower - 1e-10);
    }
    // J <= 0 on the cap rim
    for (int i = 0; i < 1000; ++i) {
        const double phi = rng.uniform(0.0, M_PI);
        CHECK(geometry_value(J, g, g.rho * std::cos(phi), g.rho * std::sin(phi)) <= 1e-8);
    }
}

TEST_CASE("geometry rejects radii without a positive lower bound") {
    ProblemParams p = params1d(8, 32);
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    // far beyond the maximizer the superlinear term dominates the bound
    CHECK_THROWS_AS((void)build_geometry(p, nl, 1.0, 100.0), GeometryInfeasible);
    // slope below the cap threshold
    CHECK_THROWS_AS((void)build_geometry(p, nl, 1.0, std::nullopt, 1e-6), GeometryInfeasible);
}

TEST_CASE("refine: immediate return at the trivial critical point") {
    ProblemParams p = params1d();
    Functional J0(p, builtin_nonlinearity("zero"), kappa_of(p));
    MinMaxResult res = refine(J0, FourierField(p), 1e-8, 50);
    CHECK(res.status == SolveStatus::converged_to_trivial);
    CHECK(res.residual == 0.0);
    CHECK(res.path_history.size() == 1);
}

TEST_CASE("solve, re-enter, and cross-check the converged state") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    SolverConfig cfg;
    cfg.mesh_radial = 24;
    cfg.mesh_angular = 24;
    cfg.max_sweeps = 120;
    cfg.cerami_tol = 1e-8;

    const SolveOutcome out = solve_linking(p, nl, kappa, cfg);
    REQUIRE(out.refined.converged);
    CHECK(out.refined.residual < 1e-8);
    CHECK(out.refined.alpha >= out.geometry.b_lower - 1e-10);
    CHECK(hs_norm(out.refined.candidate) > 1e-3);

    // mesh level history is nonincreasing
    for (std::size_t i = 1; i < out.mesh.path_history.size(); ++i)
        CHECK(out.mesh.path_history[i].second <=
              out.mesh.path_history[i - 1].second + 1e-12);

    // Hermitian symmetry preserved through all iterates
    CHECK(out.refined.candidate.check_hermitian(1e-10));

    // critical-point identity: kappa int G = 2 J(u) - <J'(u),u> ~ 2 alpha
    Functional J(p, nl, kappa);
    const double gint = kappa * J.g_integral(out.refined.candidate);
    CHECK(std::abs(gint - 2.0 * out.refined.alpha) < 1e-6);

    // idempotence: perturb and re-enter, recovered in a few steps
    Rng rng(101);
    FourierField pert = random_real_field(p, rng);
    pert *= 1e-4;
    FourierField seed = out.refined.candidate;
    seed += pert;
    MinMaxResult again = refine(J, seed, 1e-8, 5);
    CHECK(again.converged);
    CHECK(l2_norm(again.candidate) > 1e-3);

    // weak form through the extension: dtn(u) - m^{2s} kappa u = kappa fhat(u)
    auto profile = std::make_shared<const ExtensionProfile>(make_profile(p.s));
    ExtensionField ext(out.refined.candidate, profile);
    const double probes[] = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
    FourierField lhs = ext.dtn_apply(probes);
    lhs.add_scaled(out.refined.candidate, -p.mass_shift() * kappa);
    FourierField rhs = J.gradient(out.refined.candidate);
    rhs *= -1.0;  // kappa fhat = kappa shifted-multiplier u - J'(u); at J' ~ 0
    FourierField lin = apply_operator(out.refined.candidate, true);
    rhs.add_scaled(lin, kappa);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        num += std::norm(lhs.data()[i] - rhs.data()[i]);
        den += std::norm(rhs.data()[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-4);
}

TEST_CASE("zero control: degenerate geometry flagged, solve collapses") {
    ProblemParams p = params1d(8, 32);
    auto nl = builtin_nonlinearity("zero");
    SolverConfig cfg;
    cfg.mesh_radial = 8;
    cfg.mesh_angular = 8;
    cfg.max_sweeps = 40;

    const SolveOutcome out = solve_linking(p, nl, kappa_of(p), cfg);
    CHECK(out.geometry.degenerate_cap);
    CHECK(out.mesh.status == SolveStatus::degenerate_geometry);
    CHECK(out.refined.status == SolveStatus::converged_to_trivial);
}

TEST_CASE("pure power solve stays within the level bracket") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    auto nl = builtin_nonlinearity("pure_power", 3.0, p.T);
    SolverConfig cfg;
    cfg.mesh_radial = 24;
    cfg.mesh_angular = 24;
    cfg.max_sweeps = 120;

    const SolveOutcome out = solve_linking(p, nl, kappa, cfg);
    REQUIRE(out.refined.converged);
    CHECK(out.refined.residual < 1e-6);
    CHECK(out.refined.alpha >= out.geometry.b_lower - 1e-10);
    // bracketed by the initial mesh level
    CHECK(out.refined.alpha <= out.mesh.path_history.front().second + 1e-8);
}
