#include <doctest.h>

#include <cmath>

#include "frac/errors.hpp"
#include "frac/nonlinearity.hpp"
#include "frac/quadrature.hpp"

using namespace frac;

namespace {
const std::vector<double> kOrigin = {0.0};
}

TEST_CASE("builtin closed forms") {
    auto log_nl = builtin_nonlinearity("log_superlinear");
    CHECK(log_nl.f(kOrigin, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(log_nl.F(kOrigin, 0.0) == 0.0);
    CHECK(log_nl.F(kOrigin, 1.0) == doctest::Approx(0.25).epsilon(1e-12));  // int_0^1 t log(1+t)

    auto cubic = builtin_nonlinearity("pure_power", 3.0);
    CHECK(cubic.F(kOrigin, 2.0) == doctest::Approx(4.0).epsilon(1e-14));    // t^4/4
    CHECK(cubic.G(kOrigin, 2.0) == doctest::Approx(8.0).epsilon(1e-14));    // t^4/2
    CHECK(cubic.G(kOrigin, -1.3) >= 0.0);

    CHECK_THROWS_AS((void)builtin_nonlinearity("nope"), UnknownLabel);
}

TEST_CASE("potential matches the f-quadrature") {
    for (const char* label : {"log_superlinear", "pure_power", "modulated_power"}) {
        auto nl = builtin_nonlinearity(label, 3.0);
        const std::vector<double> x = {1.1};
        for (double t : {-7.0, -0.6, 0.4, 3.0, 42.0}) {
            const double ref = frac::quad::adaptive(
                [&](double tau) { return nl.f(x, tau); }, 0.0, t, 1e-12);
            CHECK(nl.F(x, t) == doctest::Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("hypothesis suite: log_superlinear passes, fails AR with witness") {
    auto nl = builtin_nonlinearity("log_superlinear");
    SamplerConfig cfg;
    auto rep = check_hypotheses(nl, cfg);
    CHECK(rep.all_pass());

    CHECK_FALSE(rep.ar.holds);
    REQUIRE(rep.ar.witness.has_value());
    CHECK(rep.ar.witness->lhs > rep.ar.witness->rhs);  // mu F > f t at the witness

    // the superlinear-but-not-AR signature: f t / F -> 2 from above
    REQUIRE(!rep.ar.ratio_trace.empty());
    double prev = 1e300;
    for (const auto& [t, ratio] : rep.ar.ratio_trace) {
        CHECK(ratio > 2.0);
        CHECK(ratio <= prev + 1e-12);
        prev = ratio;
    }
    CHECK(rep.ar.ratio_trace.back().second < 2.2);
}

TEST_CASE("hypothesis suite: pure_power(3) passes AR with (4, 1)") {
    auto nl = builtin_nonlinearity("pure_power", 3.0);
    SamplerConfig cfg;
    auto rep = check_hypotheses(nl, cfg);
    CHECK(rep.all_pass());
    CHECK(rep.ar.holds);
    CHECK(rep.ar.mu == doctest::Approx(4.0));
    CHECK(rep.ar.R == doctest::Approx(1.0));
}

TEST_CASE("zero control fails the superlinearity checks") {
    auto nl = builtin_nonlinearity("zero");
    SamplerConfig cfg;
    auto rep = check_hypotheses(nl, cfg);
    bool superquadratic_failed = false;
    for (const auto& c : rep.checks)
        if (c.name == "superquadratic_potential")
            superquadratic_failed = (c.verdict == Verdict::fail);
    CHECK(superquadratic_failed);
    CHECK(std::isinf(fit_B_A(nl, 1.0, 1)));
}

TEST_CASE("modulated power: periodicity holds and is detected") {
    auto nl = builtin_nonlinearity("modulated_power", 3.0);
    SamplerConfig cfg;
    auto rep = check_hypotheses(nl, cfg);
    for (const auto& c : rep.checks)
        if (c.name == "periodic_in_x") CHECK(c.verdict == Verdict::pass);
}

TEST_CASE("constant fits") {
    // pure power p=3: B_A = max_t (A t^2 - t^4/4) = A^2
    auto cubic = builtin_nonlinearity("pure_power", 3.0);
    CHECK(fit_B_A(cubic, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit_B_A(cubic, 2.5, 1) == doctest::Approx(6.25).epsilon(1e-8));

    // C_eps for pure power: F = t^{p+1}/(p+1) gives exactly 1/(p+1) at eps=0+
    CHECK(fit_C_eps(cubic, 0.25, 1) <= 0.25 + 1e-12);
    CHECK(fit_C_eps(cubic, 1e-12, 1) == doctest::Approx(0.25).epsilon(1e-6));

    // log_superlinear at eps: the fitted constant certifies the bound on a scan
    auto log_nl = builtin_nonlinearity("log_superlinear");
    const double eps = 0.125;
    const double ce = fit_C_eps(log_nl, eps, 1);
    CHECK(ce > 0.0);
    for (double t = 1e-3; t < 1e7; t *= 1.7) {
        CHECK(std::abs(log_nl.F(kOrigin, t)) <=
              eps * t * t + ce * std::pow(t, log_nl.p + 1.0) + 1e-12);
    }
    // independent oracle: dense scan of (F(t) - eps t^2)/t^{p+1}
    double ce_scan = 0.0;
    for (double t = 1e-4; t < 1e6; t *= 1.0001) {
        const double g = (log_nl.F(kOrigin, t) - eps * t * t) / std::pow(t, log_nl.p + 1.0);
        ce_scan = std::max(ce_scan, g);
    }
    CHECK(ce == doctest::Approx(ce_scan).epsilon(1e-6));
}

TEST_CASE("report serializes to json") {
    auto rep = check_hypotheses(builtin_nonlinearity("log_superlinear"), SamplerConfig{});
    const std::string j = rep.to_json();
    CHECK(j.find("ratio_trace") != std::string::npos);
    CHECK(j.find("g_quotient_monotone") != std::string::npos);
}
