#include "frac/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace frac::bessel {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 20000;

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), continued through mu = 0.
double gamma_one(double mu) {
    if (std::abs(mu) > 1e-4)
        return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
    // 1/Gamma(1+x) = 1 + g1 x + g2 x^2 + g3 x^3 + ...; odd part gives the limit.
    constexpr double g1 = 0.57721566490153286061;   // Euler-Mascheroni
    constexpr double g3 = -0.04200263503409523553;
    constexpr double g5 = -0.00962197152787697356;
    const double mu2 = mu * mu;
    return -(g1 + mu2 * (g3 + mu2 * g5));
}

// K_mu(x), K_{mu+1}(x) for |mu| <= 1/2, x <= 2 (Temme's series).
void temme(double mu, double x, double* kmu, double* kmu1) {
    const double x2 = 0.5 * x;
    const double mu2 = mu * mu;
    const double pimu = M_PI * mu;
    const double fact = (std::abs(pimu) < 1e-30) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::abs(e) < 1e-30) ? 1.0 : std::sinh(e) / e;
    const double gampl = 1.0 / std::tgamma(1.0 + mu);
    const double gammi = 1.0 / std::tgamma(1.0 - mu);
    const double gam1 = gamma_one(mu);
    const double gam2 = 0.5 * (gammi + gampl);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    *kmu = sum;
    *kmu1 = sum1 * (2.0 / x);
}

// Same for x > 2 via the Thompson-Barnett CF2 evaluation.
void cf2(double mu, double x, double* kmu, double* kmu1) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double delh = d, h = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i <= kMaxIter; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    *kmu = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    *kmu1 = *kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

KPair k_pair(double nu, double x) {
    if (!(nu > 0.0) || !(nu < 1.0)) throw std::invalid_argument("bessel::k_pair: nu must be in (0,1)");
    if (!(x > 0.0)) throw std::invalid_argument("bessel::k_pair: x must be positive");

    // reduce to |mu| <= 1/2 and step up with K_{v+1} = K_{v-1} + (2v/x) K_v
    const double mu = (nu <= 0.5) ? nu : nu - 1.0;
    double kmu, kmu1;
    if (x <= 2.0)
        temme(mu, x, &kmu, &kmu1);
    else
        cf2(mu, x, &kmu, &kmu1);

    if (nu <= 0.5) return {kmu, kmu1};
    // here kmu = K_{nu-1}, kmu1 = K_nu
    return {kmu1, kmu + (2.0 * nu / x) * kmu1};
}

double k_nu(double nu, double x) { return k_pair(nu, x).k_nu; }

}  // namespace frac::bessel
