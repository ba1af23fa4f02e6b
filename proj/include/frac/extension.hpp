#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "frac/field.hpp"

namespace frac {

// One-dimensional profile theta of the cylinder extension at order s:
// the decreasing solution of  theta'' + ((1-2s)/xi) theta' - theta = 0,
// theta(0) = 1, theta(inf) = 0, given by (2/Gamma(s)) (xi/2)^s K_s(xi).
//
// kappa() is the normalization constant 2^{1-2s} Gamma(1-s)/Gamma(s); it
// simultaneously equals the profile's weighted energy and the conormal
// derivative -lim xi^{1-2s} theta'(xi), which the tests cross-check.
class ExtensionProfile {
public:
    double order() const { return s_; }
    double kappa() const { return kappa_; }

    double theta(double xi) const;
    double dtheta(double xi) const;               // xi > 0
    double conormal_flux(double xi) const;        // -xi^{1-2s} theta'(xi)

    struct Energies {
        double grad;  // int xi^{1-2s} theta'^2
        double mass;  // int xi^{1-2s} theta^2
        double total() const { return grad + mass; }
    };
    const Energies& energies() const;  // quadrature, cached on first use

    // int_0^X xi^{1-2s} theta(xi)^2 dxi
    double partial_mass(double X) const;

    // Extrapolates the conormal flux to xi -> 0 from probe values (strictly
    // decreasing, length >= 3) with a least-squares fit in the exact local
    // basis {1, xi^{2-2s}, xi^2}. residual (if requested) reports the rms
    // misfit relative to the extrapolated value.
    double dtn_limit(std::span<const double> probes, double* residual = nullptr) const;

    // CSV table (xi, theta, dtheta) for plotting.
    void write_table_csv(std::ostream& os, std::span<const double> xis) const;

private:
    friend ExtensionProfile make_profile(double s);
    explicit ExtensionProfile(double s);

    double s_;
    double kappa_;
    mutable std::optional<Energies> energies_;
};

// OrderOutOfRange unless s in (0,1).
ExtensionProfile make_profile(double s);

// Least-squares extrapolation of samples (xi_i, d_i) to xi -> 0 in the basis
// {1, xi^{2-2s}, xi^2}; shared with the finite-difference verifier.
double conormal_extrapolate(std::span<const double> xis, std::span<const double> vals, double s,
                            double* residual = nullptr);

// Harmonic extension of a trace to the half-cylinder: per mode,
// v_k(xi) = c_k theta(lambda_k xi) with lambda_k = sqrt(omega^2|k|^2 + m^2).
// All quantities are evaluated semi-analytically per mode; nothing is ever
// materialized on an (N+1)-dimensional grid.
class ExtensionField {
public:
    ExtensionField(FourierField trace, std::shared_ptr<const ExtensionProfile> profile);

    const FourierField& trace() const { return trace_; }
    const ExtensionProfile& profile() const { return *profile_; }

    double lambda(std::size_t flat) const;

    // ||v||^2 in the weighted cylinder norm; equals kappa_s |trace|_H^2 up to
    // quadrature error. MasslessExtension when m = 0 and the mean is nonzero.
    double energy_sq() const;

    double grad_norm_sq() const;  // full gradient, x and xi parts
    double dxi_norm_sq() const;   // xi-derivative part only

    // int over (0,T)^N x (0,delta) of xi^{1-2s} v^2
    double strip_mass(double delta) const;

    // Per-mode conormal limit -lim xi^{1-2s} dv/dxi as a coefficient field;
    // contract: result ~ kappa_s * apply_operator(trace, unshifted).
    // Probes are rescaled per mode by 1/lambda_k unless scale_probes_per_mode
    // is cleared. ProbeTooCoarse if any mode's fit residual exceeds tol.
    FourierField dtn_apply(std::span<const double> probes, double tol = 1e-6,
                           bool scale_probes_per_mode = true) const;

    // Pointwise value v(x, xi).
    double sample(std::span<const double> x, double xi) const;

private:
    FourierField trace_;
    std::shared_ptr<const ExtensionProfile> profile_;
};

// Profile substituted for theta in the trace-inequality probe; deriv must be
// the exact derivative of value, and value(0) = 1 so the trace is unchanged.
struct PerturbationProfile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

struct TraceInequalityReport {
    double lhs;       // kappa_s |trace|_H^2
    double rhs;       // cylinder energy of the perturbed competitor
    double gap;       // rhs - lhs  (>= 0 up to quadrature noise)
    double gap_rel;   // gap / rhs
    bool holds;
};

// Checks kappa_s |Tr v|_H^2 <= ||v||^2 with theta replaced per-mode by the
// given profile; gap vanishes exactly when the perturbation is theta itself.
TraceInequalityReport trace_inequality_check(const FourierField& trace,
                                             const PerturbationProfile& perturbation,
                                             double tol = 1e-8);

}  // namespace frac
