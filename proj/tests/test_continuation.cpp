#include <doctest.h>

#include <cmath>

#include "frac/continuation.hpp"
#include "frac/errors.hpp"

using namespace frac;

namespace {

ProblemParams params1d(int K = 16, int M = 64) {
    ProblemParams p;
    p.N = 1;
    p.T = 2.0 * M_PI;
    p.s = 0.5;
    p.m = 0.5;
    p.K = K;
    p.M = M;
    return p;
}

double kappa_of(const ProblemParams& p) { return make_profile(p.s).kappa(); }

}  // namespace

TEST_CASE("hy_constant: admissible range and certified bound on samples") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    CHECK_THROWS_AS((void)hy_constant(p, 2.0, kappa), DivergentSum);
    CHECK_THROWS_AS((void)hy_constant(p, 1.5, kappa), DivergentSum);

    // finite critical exponent: N = 2, s = 0.75 has 2N/(N-2s) = 8
    ProblemParams p2 = p;
    p2.N = 2;
    p2.s = 0.75;
    p2.K = 4;
    p2.M = 12;
    CHECK_THROWS_AS((void)hy_constant(p2, 8.0, kappa_of(p2)), DivergentSum);
    CHECK(hy_constant(p2, 4.0, kappa_of(p2)) > 0.0);

    const double q = 3.0;
    const double cpp = hy_constant(p, q, kappa);
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        FourierField z = random_real_field(p, rng, -1, /*zero_mean=*/true);
        const double lq = trace_lq_norm(z, q);
        const double xnorm = std::sqrt(kappa * hs_norm_sq(z));
        CHECK(lq <= cpp * xnorm * (1.0 + 1e-10));
    }

    // single-mode field: both sides in closed form up to grid quadrature
    FourierField one(p);
    int k1[1] = {1}, km1[1] = {-1};
    one.set_coeff(k1, cdouble{0.5, 0.0});
    one.set_coeff(km1, cdouble{0.5, 0.0});
    const double lq1 = trace_lq_norm(one, q);
    CHECK(lq1 <= cpp * std::sqrt(kappa * hs_norm_sq(one)));
}

TEST_CASE("bounds: b = 1/8 exactly, K1 in (0, K2], across builtins") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    for (const char* label : {"log_superlinear", "pure_power", "modulated_power"}) {
        auto nl = builtin_nonlinearity(label, 3.0, p.T);
        const ContinuationBounds b = bounds(p, nl, kappa);
        CHECK(b.b == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(b.m0 == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(b.K1 > 0.0);
        CHECK(b.K1 <= b.K2);
    }
}

TEST_CASE("bounds: K1 <= K2 across orders (N = 2 keeps every s admissible)") {
    for (double s : {0.3, 0.5, 0.7}) {
        ProblemParams p;
        p.N = 2;
        p.T = 2.0 * M_PI;
        p.s = s;
        p.m = 0.1;
        p.K = 4;
        p.M = 12;
        auto nl = builtin_nonlinearity("pure_power", 1.7, p.T);
        const ContinuationBounds b = bounds(p, nl, kappa_of(p));
        CHECK(b.K1 > 0.0);
        CHECK(b.K1 <= b.K2);
    }
}

TEST_CASE("nontriviality floor is the root of the level identity") {
    ProblemParams p = params1d();
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    const ContinuationBounds b = bounds(p, nl, kappa_of(p));
    const double X = nontriviality_floor(b, nl, p);
    CHECK(X > 0.0);
    const double holder = std::pow(std::pow(p.T, p.N), (nl.p - 1.0) / (nl.p + 1.0));
    const double c14 = fit_C_eps(nl, 0.25, p.N);
    const double lhs = b.kappa * (holder * X * X + (nl.p + 3.0) * c14 * std::pow(X, nl.p + 1.0));
    CHECK(lhs == doctest::Approx(2.0 * b.K1).epsilon(1e-10));
}

TEST_CASE("strip bound: zero, single-mode closed form, random sweep") {
    ProblemParams p = params1d();
    auto profile = std::make_shared<const ExtensionProfile>(make_profile(p.s));

    StripReport z = strip_bound_check(ExtensionField(FourierField(p), profile), 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.holds);

    // single mode at s = 1/2, delta = 1: everything in closed exponential form
    FourierField one(p);
    int k2[1] = {2}, km2[1] = {-2};
    one.set_coeff(k2, cdouble{M_SQRT1_2, 0.0});
    one.set_coeff(km2, cdouble{M_SQRT1_2, 0.0});
    const double lam = std::sqrt(p.omega() * p.omega() * 4.0 + p.m * p.m);
    ExtensionField ve(one, profile);
    const StripReport rep = strip_bound_check(ve, 1.0);
    const double lhs_exact = (1.0 - std::exp(-2.0 * lam)) / (2.0 * lam);
    CHECK(rep.lhs == doctest::Approx(lhs_exact).epsilon(1e-9));
    CHECK(rep.trace_term == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.grad_term == doctest::Approx(0.5 * lam).epsilon(1e-9));
    CHECK(rep.holds);
    CHECK(rep.slack > 0.0);

    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        FourierField u = random_real_field(p, rng);
        ExtensionField v(u, profile);
        for (double delta : {0.1, 1.0, 10.0}) CHECK(strip_bound_check(v, delta).holds);
    }
}

TEST_CASE("mean-free trace chain: L2 below omega^{-2s} energies") {
    ProblemParams p = params1d();
    const double kappa = kappa_of(p);
    const double w2s = std::pow(p.omega(), 2.0 * p.s);
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        FourierField z = random_real_field(p, rng, -1, true);
        const double l2 = l2_norm_sq(z);
        const double hs = hs_norm_sq(z);
        CHECK(l2 <= hs / w2s * (1.0 + 1e-12));
        CHECK(hs / w2s <= kappa * hs / (w2s * kappa) * (1.0 + 1e-12));
    }
}

TEST_CASE("schedule validation") {
    ProblemParams p = params1d();
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    ContinuationConfig cfg;
    CHECK_THROWS_AS(
        (void)run_continuation(p, nl, kappa_of(p), {0.25, 0.25}, cfg), InvalidParams);
    CHECK_THROWS_AS(
        (void)run_continuation(p, nl, kappa_of(p), {0.75}, cfg), InvalidParams);
    CHECK_THROWS_AS((void)run_continuation(p, nl, kappa_of(p), {}, cfg), InvalidParams);
}

TEST_CASE("short continuation run stays within the bracket") {
    ProblemParams p = params1d();
    auto nl = builtin_nonlinearity("log_superlinear", 3.0, p.T);
    ContinuationConfig cfg;
    cfg.solver.mesh_radial = 20;
    cfg.solver.mesh_angular = 20;
    cfg.solver.max_sweeps = 80;
    const ContinuationReport rep =
        run_continuation(p, nl, kappa_of(p), {0.25, 0.125}, cfg);
    REQUIRE(rep.steps.size() == 2);
    for (const auto& st : rep.steps) {
        CHECK(st.alpha >= rep.bounds.K1 - 1e-8);
        CHECK(st.alpha <= rep.bounds.K2 + 1e-8);
        CHECK(st.grad_slack >= -1e-8);
        CHECK(st.semi_slack >= -1e-8);
        CHECK(st.mass_slack >= -1e-8);
    }
    CHECK(rep.residual0 < 1e-5);
    CHECK(rep.u0_lp1 >= rep.floor_lp1);
    // warm-start drift between adjacent masses: diagnostic, not asserted
    MESSAGE("alpha drift across schedule: ",
            std::abs(rep.steps[1].alpha - rep.steps[0].alpha) / rep.steps[0].alpha);
    const std::string j = rep.to_json();
    CHECK(j.find("\"K1\"") != std::string::npos);
    CHECK(j.find("\"field\"") != std::string::npos);  // per-mass solutions embedded
}
