#include <doctest.h>

#include <cmath>

#include "frac/extension.hpp"
#include "frac/functional.hpp"

using namespace frac;

namespace {

ProblemParams params1d(int K = 8, int M = 32, double m = 1.0) {
    ProblemParams p;
    p.N = 1;
    p.T = 2.0 * M_PI;
    p.s = 0.5;
    p.m = m;
    p.K = K;
    p.M = M;
    return p;
}

Functional make_functional(const char* label, const ProblemParams& p, bool normalized = false) {
    auto nl = builtin_nonlinearity(label, 3.0, p.T);
    const double kappa = normalized ? 1.0 : make_profile(p.s).kappa();
    return Functional(p, std::move(nl), kappa);
}

}  // namespace

TEST_CASE("functional value: zero field, constant field, linear case") {
    ProblemParams p = params1d();
    Functional J = make_functional("log_superlinear", p, /*normalized=*/true);
    CHECK(J.value(FourierField(p)) == 0.0);

    // constant field c: quadratic part vanishes, J = -int F(x,c) = -T F(c)
    const double c = 1.7;
    FourierField u(p);
    int k0[1] = {0};
    u.set_coeff(k0, cdouble{c * std::sqrt(p.T), 0.0});
    const std::vector<double> origin = {0.0};
    CHECK(J.quadratic_part(u) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(J.value(u) ==
          doctest::Approx(-p.T * J.nonlinearity().F(origin, c)).epsilon(1e-11));

    // f = 0, one conjugate mode pair: J = kappa (symbol - m^{2s}) |c_k|^2 / 2 * 2
    Functional J0 = make_functional("zero", p);
    FourierField v(p);
    int k2[1] = {2}, km2[1] = {-2};
    v.set_coeff(k2, cdouble{0.8, 0.3});
    v.set_coeff(km2, cdouble{0.8, -0.3});
    const double sym = p.symbol(4.0);
    const double expect = J0.kappa() * (sym - p.mass_shift()) * std::norm(cdouble{0.8, 0.3});
    CHECK(J0.value(v) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("gradient: critical origin, linear case, directional consistency") {
    ProblemParams p = params1d();
    for (const char* label : {"log_superlinear", "pure_power", "modulated_power"}) {
        Functional J = make_functional(label, p);

        // u = 0 is critical since f(x,0) = 0
        FourierField g0 = J.gradient(FourierField(p));
        CHECK(l2_norm(g0) < 1e-14);

        // order-2 central differences at random points, three step sizes
        Rng rng(71);
        for (int trial = 0; trial < 20; ++trial) {
            FourierField u = random_real_field(p, rng);
            u *= 0.5;
            FourierField h = random_real_field(p, rng);
            h *= 0.5;
            const FourierField g = J.gradient(u);
            const double dg = Functional::inner_l2(g, h);
            double prev_err = -1.0;
            double rate_lo = 10.0;
            for (double eps : {1e-3, 5e-4, 2.5e-4}) {
                FourierField up = u, dn = u;
                up.add_scaled(h, eps);
                dn.add_scaled(h, -eps);
                const double fd = (J.value(up) - J.value(dn)) / (2.0 * eps);
                const double err = std::abs(fd - dg);
                if (prev_err > 0.0 && err > 1e-13)
                    rate_lo = std::min(rate_lo, std::log(prev_err / err) / std::log(2.0));
                prev_err = err;
            }
            // halving eps divides the error by ~4 (allows roundoff floors)
            CHECK((rate_lo > 1.9 || prev_err < 1e-10));
        }
    }

    // f = 0: gradient is exactly kappa * shifted multiplier
    Functional J0 = make_functional("zero", p);
    Rng rng(5);
    FourierField u = random_real_field(p, rng);
    FourierField g = J0.gradient(u);
    FourierField ref = apply_operator(u, true);
    ref *= J0.kappa();
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(g.data()[i] - ref.data()[i]) < 1e-12);
}

TEST_CASE("cerami measure: zero field and the linear single mode") {
    ProblemParams p = params1d();
    Functional J0 = make_functional("zero", p);
    auto [lvl, cer] = J0.cerami_measure(FourierField(p));
    CHECK(lvl == 0.0);
    CHECK(cer == 0.0);

    FourierField u(p);
    int k1[1] = {1}, km1[1] = {-1};
    u.set_coeff(k1, cdouble{0.5, 0.0});
    u.set_coeff(km1, cdouble{0.5, 0.0});
    auto [lvl1, cer1] = J0.cerami_measure(u);
    const double sym = p.symbol(1.0);
    const double k = J0.kappa();
    // closed form: (1 + ||u||_X) * kappa^{-1/2} sqrt(sum |g|^2 / sym)
    const double gnorm2 = 2.0 * std::pow(k * (sym - p.mass_shift()) * 0.5, 2) / sym;
    const double expect = (1.0 + std::sqrt(k * sym * 0.5)) * std::sqrt(gnorm2 / k);
    CHECK(cer1 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(lvl1 == doctest::Approx(k * (sym - p.mass_shift()) * 0.25).epsilon(1e-12));
}

TEST_CASE("identity 2J - <J'(u),u> = kappa int G") {
    ProblemParams p = params1d();
    Rng rng(93);
    for (const char* label : {"log_superlinear", "pure_power"}) {
        Functional J = make_functional(label, p);
        for (int trial = 0; trial < 10; ++trial) {
            FourierField u = random_real_field(p, rng);
            const double lhs = 2.0 * J.value(u) - Functional::inner_l2(J.gradient(u), u);
            const double rhs = J.kappa() * J.g_integral(u);
            CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + J.xnorm_sq(u)));
        }
    }
}

TEST_CASE("quadratic part is nonnegative, zero only on constants") {
    ProblemParams p = params1d();
    Functional J = make_functional("log_superlinear", p);
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        FourierField u = random_real_field(p, rng);
        CHECK(J.quadratic_part(u) >= 0.0);
    }
    FourierField c(p);
    int k0[1] = {0};
    c.set_coeff(k0, cdouble{2.0, 0.0});
    CHECK(J.quadratic_part(c) == 0.0);
}

TEST_CASE("constant fields have nonpositive functional value") {
    ProblemParams p = params1d();
    for (const char* label : {"log_superlinear", "pure_power", "modulated_power"}) {
        Functional J = make_functional(label, p);
        for (double c : {-3.0, -0.4, 0.1, 2.2}) {
            FourierField u(p);
            int k0[1] = {0};
            u.set_coeff(k0, cdouble{c * std::sqrt(p.T), 0.0});
            CHECK(J.value(u) <= 1e-12);
        }
    }
}

TEST_CASE("hessian matches gradient differences") {
    ProblemParams p = params1d();
    Functional J = make_functional("log_superlinear", p);
    Rng rng(201);
    FourierField u = random_real_field(p, rng);
    FourierField h = random_real_field(p, rng);
    const FourierField Hh = J.hessian_apply(u, h);
    const double eps = 1e-5;
    FourierField up = u, dn = u;
    up.add_scaled(h, eps);
    dn.add_scaled(h, -eps);
    FourierField diff = J.gradient(up);
    diff.add_scaled(J.gradient(dn), -1.0);
    diff *= 1.0 / (2.0 * eps);
    for (std::size_t i = 0; i < Hh.size(); ++i)
        CHECK(std::abs(Hh.data()[i] - diff.data()[i]) < 1e-6);
}

TEST_CASE("raw-L2 dual switch for diagnostics") {
    ProblemParams p = params1d();
    Functional J = make_functional("log_superlinear", p);
    Rng rng(37);
    FourierField g = random_real_field(p, rng);
    J.raw_l2_dual = true;
    CHECK(J.dual_norm(g) == doctest::Approx(l2_norm(g)).epsilon(1e-15));
    J.raw_l2_dual = false;
    CHECK(J.dual_norm(g) != doctest::Approx(l2_norm(g)));
}

TEST_CASE("m = 0 dual norm weighs the mean mode by omega^{2s}") {
    ProblemParams p = params1d(8, 32, 0.0);
    Functional J = make_functional("log_superlinear", p);
    FourierField g(p);
    int k0[1] = {0};
    g.set_coeff(k0, cdouble{1.0, 0.0});
    const double expect = std::sqrt(1.0 / std::pow(p.omega(), 2.0 * p.s) / J.kappa());
    CHECK(J.dual_norm(g) == doctest::Approx(expect).epsilon(1e-14));
}
