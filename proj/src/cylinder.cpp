#include "frac/cylinder.hpp"

#include <cmath>
#include <ostream>

#include "frac/errors.hpp"
#include "frac/extension.hpp"

namespace frac {

namespace {

// Face coefficient: flux continuity with the weight integrated exactly,
//   q = a_{j+1/2} (w_j - w_{j+1}),  a = 2s / (xi_{j+1}^{2s} - xi_j^{2s}).
double face_coeff(double s, double xl, double xr) {
    return 2.0 * s / (std::pow(xr, 2.0 * s) - std::pow(xl, 2.0 * s));
}

// Exact integral of xi^{1-2s} over (a, b).
double weight_mass(double s, double a, double b) {
    const double e = 2.0 - 2.0 * s;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

ModeProblem ModeProblem::graded(double lambda, double s, double height, int J, double beta) {
    ModeProblem mp;
    mp.lambda = lambda;
    mp.s = s;
    mp.height = height;
    mp.nodes.resize(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j)
        mp.nodes[static_cast<std::size_t>(j)] =
            height * std::pow(static_cast<double>(j) / J, beta);
    return mp;
}

void ModeProblem::validate() const {
    if (!(lambda > 0.0)) throw InvalidParams("ModeProblem: lambda must be positive");
    if (!(s > 0.0) || !(s < 1.0)) throw InvalidParams("ModeProblem: s must lie in (0,1)");
    if (nodes.size() < 17) throw InvalidParams("ModeProblem: need J >= 16");
    if (nodes.front() != 0.0) throw InvalidParams("ModeProblem: grid must start at 0");
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        if (!(nodes[j] < nodes[j + 1])) throw InvalidParams("ModeProblem: grid must increase");
}

std::vector<double> solve_mode(const ModeProblem& mp) {
    mp.validate();
    const auto& x = mp.nodes;
    const std::size_t J = x.size() - 1;
    const double lam2 = mp.lambda * mp.lambda;

    // unknowns w_1 .. w_{J-1}; w_0 = 1, w_J = 0
    const std::size_t n = J - 1;
    std::vector<double> diag(n), lower(n), upper(n), rhs(n, 0.0);
    for (std::size_t j = 1; j < J; ++j) {
        const double al = face_coeff(mp.s, x[j - 1], x[j]);
        const double ar = face_coeff(mp.s, x[j], x[j + 1]);
        const double cellmass = weight_mass(mp.s, 0.5 * (x[j - 1] + x[j]), 0.5 * (x[j] + x[j + 1]));
        const std::size_t i = j - 1;
        diag[i] = al + ar + lam2 * cellmass;
        lower[i] = -al;
        upper[i] = -ar;
        if (j == 1) rhs[i] += al * 1.0;  // Dirichlet value at xi = 0
    }

    // Thomas sweep
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw SingularSystem("solve_mode: zero pivot");
        const double f = lower[i] / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw SingularSystem("solve_mode: zero pivot");
    std::vector<double> w(J + 1);
    w[0] = 1.0;
    w[J] = 0.0;
    w[n] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) w[i + 1] = (rhs[i] - upper[i] * w[i + 2]) / diag[i];
    return w;
}

double dtn_symbol(const ModeProblem& mp, std::span<const double> profile, double* residual) {
    mp.validate();
    const auto& x = mp.nodes;
    if (profile.size() != x.size()) throw InvalidParams("dtn_symbol: profile size mismatch");
    const double s = mp.s;

    // The face flux equals the xi^{2s-1}-weighted average of the conormal
    // flux across the face, so fit d(xi) = d0 + a xi^{2-2s} + b xi^2 with the
    // basis functions averaged the same way.
    const std::size_t nfaces = std::min<std::size_t>(10, (x.size() - 1) / 4 + 3);
    std::vector<double> q(nfaces), basis1(nfaces), basis2(nfaces);
    for (std::size_t f = 0; f < nfaces; ++f) {
        const double xl = x[f], xr = x[f + 1];
        q[f] = face_coeff(s, xl, xr) * (profile[f] - profile[f + 1]);
        const double denom = std::pow(xr, 2.0 * s) - std::pow(xl, 2.0 * s);
        // averages of xi^{2-2s} and xi^2 with weight 2s xi^{2s-1} / denom
        basis1[f] = (std::pow(xr, 2.0) - std::pow(xl, 2.0)) * s / denom;
        basis2[f] = (std::pow(xr, 2.0 * s + 2.0) - std::pow(xl, 2.0 * s + 2.0)) * 2.0 * s /
                    ((2.0 * s + 2.0) * denom);
    }

    // weighted least squares via scaled normal equations (reuse the shared
    // extrapolation by mapping the averaged basis onto pseudo-probes)
    const double c1 = basis1[nfaces - 1], c2 = basis2[nfaces - 1];
    double a11 = 0, a12 = 0, a13 = 0, a22 = 0, a23 = 0, a33 = 0, r1 = 0, r2 = 0, r3 = 0;
    for (std::size_t f = 0; f < nfaces; ++f) {
        const double b1 = basis1[f] / c1, b2 = basis2[f] / c2;
        a11 += 1.0;
        a12 += b1;
        a13 += b2;
        a22 += b1 * b1;
        a23 += b1 * b2;
        a33 += b2 * b2;
        r1 += q[f];
        r2 += b1 * q[f];
        r3 += b2 * q[f];
    }
    // 3x3 solve (symmetric)
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (std::abs(det) < 1e-250) throw SingularSystem("dtn_symbol: degenerate face set");
    const double d0 = (r1 * (a22 * a33 - a23 * a23) - a12 * (r2 * a33 - a23 * r3) +
                       a13 * (r2 * a23 - a22 * r3)) /
                      det;
    const double ca = (a11 * (r2 * a33 - r3 * a23) - r1 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * r3 - r2 * a13)) /
                      det;
    const double cb = (a11 * (a22 * r3 - a23 * r2) - a12 * (a12 * r3 - r2 * a13) +
                       r1 * (a12 * a23 - a22 * a13)) /
                      det;
    if (residual != nullptr) {
        double rss = 0.0;
        for (std::size_t f = 0; f < nfaces; ++f) {
            const double fit = d0 + ca * basis1[f] / c1 + cb * basis2[f] / c2;
            rss += (fit - q[f]) * (fit - q[f]);
        }
        *residual = std::sqrt(rss / nfaces) / std::max(std::abs(d0), 1e-300);
    }
    return d0;
}

double discrete_energy(const ModeProblem& mp, std::span<const double> profile) {
    mp.validate();
    const auto& x = mp.nodes;
    if (profile.size() != x.size()) throw InvalidParams("discrete_energy: profile size mismatch");
    const std::size_t J = x.size() - 1;
    const double lam2 = mp.lambda * mp.lambda;
    double acc = 0.0;
    for (std::size_t f = 0; f < J; ++f) {
        const double dw = profile[f] - profile[f + 1];
        acc += face_coeff(mp.s, x[f], x[f + 1]) * dw * dw;
    }
    for (std::size_t j = 0; j <= J; ++j) {
        const double lo = (j == 0) ? 0.0 : 0.5 * (x[j - 1] + x[j]);
        const double hi = (j == J) ? x[J] : 0.5 * (x[j] + x[j + 1]);
        acc += lam2 * weight_mass(mp.s, lo, hi) * profile[j] * profile[j];
    }
    return acc;
}

std::vector<ConvergenceRow> convergence_study(double lambda, double s, double height,
                                              std::span<const int> Js, double beta) {
    const ExtensionProfile prof = make_profile(s);
    const double exact = prof.kappa() * std::pow(lambda, 2.0 * s);
    std::vector<ConvergenceRow> rows;
    for (int J : Js) {
        const ModeProblem mp = ModeProblem::graded(lambda, s, height, J, beta);
        const std::vector<double> w = solve_mode(mp);
        const double sym = dtn_symbol(mp, w);
        ConvergenceRow row;
        row.J = J;
        row.lambda = lambda;
        row.s = s;
        row.symbol = sym;
        row.error = std::abs(sym - exact) / exact;
        row.order = 0.0;
        if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0)
            row.order = std::log(rows.back().error / row.error) /
                        std::log(static_cast<double>(J) / rows.back().J);
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
    os.precision(17);
    os << "J,lambda,s,symbol,error,order\n";
    for (const auto& r : rows)
        os << r.J << "," << r.lambda << "," << r.s << "," << r.symbol << "," << r.error << ","
           << r.order << "\n";
}

}  // namespace frac
