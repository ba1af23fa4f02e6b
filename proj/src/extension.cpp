#include "frac/extension.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <cmath>
#include <ostream>

#include "frac/bessel.hpp"
#include "frac/errors.hpp"
#include "frac/quadrature.hpp"

namespace frac {

namespace {

// Solve the 3x3 normal equations for least squares with column scaling.
bool solve3(std::array<std::array<double, 3>, 3>& A, std::array<double, 3>& b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300) return false;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < 3; ++i) b[i] /= A[i][i];
    return true;
}

}  // namespace

double conormal_extrapolate(std::span<const double> xis, std::span<const double> vals, double s,
                            double* residual) {
    const std::size_t n = xis.size();
    if (n < 3 || vals.size() != n)
        throw InvalidParams("conormal_extrapolate: need >= 3 probe values");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(xis[i] > xis[i + 1]) || !(xis[i + 1] > 0.0))
            throw InvalidParams("conormal_extrapolate: probes must decrease toward 0");

    const double e1 = 2.0 - 2.0 * s;
    // column scales keep the normal equations well conditioned
    const double s1 = std::pow(xis[0], e1), s2 = xis[0] * xis[0];
    std::array<std::array<double, 3>, 3> A{};
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < n; ++i) {
        const double row[3] = {1.0, std::pow(xis[i], e1) / s1, (xis[i] * xis[i]) / s2};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) A[a][b] += row[a] * row[b];
            rhs[a] += row[a] * vals[i];
        }
    }
    std::array<double, 3> coef = rhs;
    if (!solve3(A, coef)) throw SingularSystem("conormal_extrapolate: degenerate probe set");

    if (residual != nullptr) {
        if (n == 3) {
            // interpolation is exact; compare against the two-term fit instead
            double b11 = 0, b12 = 0, b22 = 0, r1 = 0, r2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = std::pow(xis[i], e1) / s1;
                b11 += 1.0;
                b12 += t;
                b22 += t * t;
                r1 += vals[i];
                r2 += t * vals[i];
            }
            const double det = b11 * b22 - b12 * b12;
            const double d0_two = (r1 * b22 - b12 * r2) / det;
            *residual = std::abs(coef[0] - d0_two) / std::max(std::abs(coef[0]), 1e-300);
        } else {
            double rss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double fit = coef[0] + coef[1] * std::pow(xis[i], e1) / s1 +
                                   coef[2] * (xis[i] * xis[i]) / s2;
                rss += (fit - vals[i]) * (fit - vals[i]);
            }
            *residual = std::sqrt(rss / n) / std::max(std::abs(coef[0]), 1e-300);
        }
    }
    return coef[0];
}

namespace {

// theta and theta' for xi <= 1 by the two-series form
//   theta = sum_j a_j u^{2j} - u^{2s} sum_j b_j u^{2j},   u = xi/2,
//   a_0 = 1, a_{j+1} = a_j/((j+1)(j+1-s)),
//   b_0 = Gamma(1-s)/Gamma(1+s), b_{j+1} = b_j/((j+1)(j+1+s)).
// The Bessel-K form of theta' subtracts terms of size u^{-s-1} whose
// difference is only u^{s-1}; this form has no cancellation.
void theta_series(double s, double xi, double* val, double* deriv) {
    const double u = 0.5 * xi;
    const double u2 = u * u;
    const double u2s = std::pow(u, 2.0 * s);
    double a = 1.0;
    double b = std::tgamma(1.0 - s) / std::tgamma(1.0 + s);
    double pow_even = 1.0;  // u^{2j}
    double va = 1.0, vb = b;
    double da = 0.0;               // sum j a_j u^{2j-1}
    double db = s * b;             // sum (s+j) b_j u^{2j}
    for (int j = 1; j <= 40; ++j) {
        a /= j * (j - s);
        b /= j * (j + s);
        pow_even *= u2;
        const double ta = a * pow_even;
        const double tb = b * pow_even;
        va += ta;
        vb += tb;
        da += j * ta / u;
        db += (s + j) * tb;
        if (ta < 1e-18 * va && tb < 1e-18 * std::abs(vb)) break;
    }
    if (val != nullptr) *val = va - u2s * vb;
    if (deriv != nullptr) *deriv = da - (u2s / u) * db;
}

}  // namespace

ExtensionProfile::ExtensionProfile(double s) : s_(s) {
    kappa_ = std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

ExtensionProfile make_profile(double s) {
    if (!(s > 0.0) || !(s < 1.0))
        throw OrderOutOfRange("make_profile: s must lie in (0,1)");
    return ExtensionProfile(s);
}

double ExtensionProfile::theta(double xi) const {
    if (xi <= 0.0) return 1.0;
    if (xi > 700.0) return 0.0;  // underflow region
    if (xi <= 1.0) {
        double v;
        theta_series(s_, xi, &v, nullptr);
        return v;
    }
    const auto kp = bessel::k_pair(s_, xi);
    return 2.0 / std::tgamma(s_) * std::pow(0.5 * xi, s_) * kp.k_nu;
}

double ExtensionProfile::dtheta(double xi) const {
    if (!(xi > 0.0)) throw InvalidParams("ExtensionProfile::dtheta: xi must be positive");
    if (xi > 700.0) return 0.0;
    if (xi <= 1.0) {
        double d;
        theta_series(s_, xi, nullptr, &d);
        return d;
    }
    const auto kp = bessel::k_pair(s_, xi);
    // theta' = (2/Gamma(s)) (xi/2)^s [ (2s/xi) K_s - K_{s+1} ]
    return 2.0 / std::tgamma(s_) * std::pow(0.5 * xi, s_) *
           ((2.0 * s_ / xi) * kp.k_nu - kp.k_nup1);
}

double ExtensionProfile::conormal_flux(double xi) const {
    return -std::pow(xi, 1.0 - 2.0 * s_) * dtheta(xi);
}

const ExtensionProfile::Energies& ExtensionProfile::energies() const {
    if (!energies_) {
        const double w = 1.0 - 2.0 * s_;
        // theta^2 ~ e^{-2 xi}: beyond 80 the weighted tail is < 1e-60
        const double upper = 80.0;
        Energies e;
        e.grad = quad::singular_lower_endpoint(
            [this, w](double xi) { return std::pow(xi, w) * dtheta(xi) * dtheta(xi); }, upper);
        e.mass = quad::singular_lower_endpoint(
            [this, w](double xi) { return std::pow(xi, w) * theta(xi) * theta(xi); }, upper);
        energies_ = e;
    }
    return *energies_;
}

double ExtensionProfile::partial_mass(double X) const {
    if (X <= 0.0) return 0.0;
    const double w = 1.0 - 2.0 * s_;
    return quad::singular_lower_endpoint(
        [this, w](double xi) { return std::pow(xi, w) * theta(xi) * theta(xi); },
        std::min(X, 80.0));
}

double ExtensionProfile::dtn_limit(std::span<const double> probes, double* residual) const {
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) vals[i] = conormal_flux(probes[i]);
    return conormal_extrapolate(probes, vals, s_, residual);
}

void ExtensionProfile::write_table_csv(std::ostream& os, std::span<const double> xis) const {
    os.precision(17);
    os << "xi,theta,dtheta\n";
    for (double xi : xis)
        os << xi << "," << theta(xi) << "," << (xi > 0.0 ? dtheta(xi) : -INFINITY) << "\n";
}

ExtensionField::ExtensionField(FourierField trace, std::shared_ptr<const ExtensionProfile> profile)
    : trace_(std::move(trace)), profile_(std::move(profile)) {
    if (std::abs(profile_->order() - trace_.params().s) > 1e-14)
        throw InvalidParams("ExtensionField: profile order differs from trace params");
}

double ExtensionField::lambda(std::size_t flat) const {
    const ProblemParams& p = trace_.params();
    const double w = p.omega();
    return std::sqrt(w * w * trace_.ksq(flat) + p.m * p.m);
}

namespace {

void require_massive_mean(const FourierField& trace) {
    const ProblemParams& p = trace.params();
    if (p.m > 0.0) return;
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    if (std::abs(trace.coeff(zero)) > 0.0)
        throw MasslessExtension(
            "extension energy: m = 0 with a nonzero mean mode has no finite-energy extension");
}

}  // namespace

double ExtensionField::energy_sq() const {
    require_massive_mean(trace_);
    const double s = profile_->order();
    const double Et = profile_->energies().total();
    double acc = 0.0;
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const double nrm = std::norm(trace_.data()[i]);
        if (nrm == 0.0) continue;
        acc += nrm * std::pow(lambda(i), 2.0 * s) * Et;
    }
    return acc;
}

double ExtensionField::grad_norm_sq() const {
    require_massive_mean(trace_);
    const ProblemParams& p = trace_.params();
    const double s = profile_->order();
    const auto& e = profile_->energies();
    const double w2 = p.omega() * p.omega();
    double acc = 0.0;
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const double nrm = std::norm(trace_.data()[i]);
        if (nrm == 0.0) continue;
        const double lam = lambda(i);
        const double xfrac = w2 * trace_.ksq(i) / (lam * lam);  // <= 1
        acc += nrm * std::pow(lam, 2.0 * s) * (e.grad + xfrac * e.mass);
    }
    return acc;
}

double ExtensionField::dxi_norm_sq() const {
    require_massive_mean(trace_);
    const double s = profile_->order();
    const double Eg = profile_->energies().grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const double nrm = std::norm(trace_.data()[i]);
        if (nrm == 0.0) continue;
        acc += nrm * std::pow(lambda(i), 2.0 * s) * Eg;
    }
    return acc;
}

double ExtensionField::strip_mass(double delta) const {
    require_massive_mean(trace_);
    const double s = profile_->order();
    double acc = 0.0;
    std::map<double, double> by_ksq;  // lambda depends on |k|^2 only
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const double nrm = std::norm(trace_.data()[i]);
        if (nrm == 0.0) continue;
        const double ksq = trace_.ksq(i);
        auto it = by_ksq.find(ksq);
        if (it == by_ksq.end()) {
            const double lam = lambda(i);
            // int_0^delta xi^{1-2s} theta(lam xi)^2 = lam^{2s-2} PartialMass(lam delta)
            it = by_ksq
                     .emplace(ksq, std::pow(lam, 2.0 * s - 2.0) *
                                       profile_->partial_mass(lam * delta))
                     .first;
        }
        acc += nrm * it->second;
    }
    return acc;
}

FourierField ExtensionField::dtn_apply(std::span<const double> probes, double tol,
                                       bool scale_probes_per_mode) const {
    const ProblemParams& p = trace_.params();
    FourierField out(p, trace_.hermitian());
    const double s = profile_->order();
    std::vector<double> xs(probes.begin(), probes.end());
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const cdouble c = trace_.data()[i];
        if (c == cdouble{0.0, 0.0}) continue;
        const double lam = lambda(i);
        if (lam == 0.0) continue;  // m = 0 zero mode: conormal limit vanishes with the symbol
        // -xi^{1-2s} d/dxi theta(lam xi) = lam^{2s} * flux(lam xi); fit in the
        // master variable where the expansion exponents are exact.
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const double xi_master = scale_probes_per_mode ? probes[j] : lam * probes[j];
            xs[j] = xi_master;
            vals[j] = profile_->conormal_flux(xi_master);
        }
        double resid = 0.0;
        const double d0 = conormal_extrapolate(xs, vals, s, &resid);
        if (resid > tol)
            throw ProbeTooCoarse("dtn_apply: extrapolation residual " + std::to_string(resid) +
                                 " exceeds tolerance");
        out.data()[i] = c * std::pow(lam, 2.0 * s) * d0;
    }
    return out;
}

double ExtensionField::sample(std::span<const double> x, double xi) const {
    const ProblemParams& p = trace_.params();
    const double w = p.omega();
    const double invroot = 1.0 / std::sqrt(std::pow(p.T, p.N));
    cdouble acc{0.0, 0.0};
    int k[4];
    for (std::size_t i = 0; i < trace_.size(); ++i) {
        const cdouble c = trace_.data()[i];
        if (c == cdouble{0.0, 0.0}) continue;
        trace_.unflatten(i, k);
        double phase = 0.0;
        for (int d = 0; d < p.N; ++d) phase += w * k[d] * x[d];
        acc += c * profile_->theta(lambda(i) * xi) * std::exp(cdouble{0.0, phase});
    }
    return acc.real() * invroot;
}

TraceInequalityReport trace_inequality_check(const FourierField& trace,
                                             const PerturbationProfile& perturbation,
                                             double tol) {
    const ProblemParams& p = trace.params();
    auto profile = std::make_shared<const ExtensionProfile>(make_profile(p.s));
    const double w = 1.0 - 2.0 * p.s;

    // 1-D energy of the substituted profile (must be finite for admissibility)
    const double Epert = quad::singular_lower_endpoint(
        [&](double xi) {
            const double v = perturbation.value(xi), dv = perturbation.deriv(xi);
            return std::pow(xi, w) * (dv * dv + v * v);
        },
        80.0);

    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double nrm = std::norm(trace.data()[i]);
        if (nrm == 0.0) continue;
        const double wv = p.omega();
        const double lam2s = std::pow(wv * wv * trace.ksq(i) + p.m * p.m, p.s);
        lhs += profile->kappa() * lam2s * nrm;
        rhs += lam2s * nrm * Epert;
    }
    TraceInequalityReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.gap = rhs - lhs;
    rep.gap_rel = (rhs > 0.0) ? rep.gap / rhs : 0.0;
    rep.holds = rep.gap >= -tol * std::max(rhs, 1.0);
    return rep;
}

}  // namespace frac
