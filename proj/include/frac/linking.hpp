#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frac/functional.hpp"

namespace frac {

// Mean mode vs zero-mean remainder; u = y + z exactly.
std::pair<FourierField, FourierField> split(const FourierField& u);

// Sharp constant of the coercive quadratic part on zero-mean fields:
//   |u|_H^2 - m^{2s}|u|_{L2}^2 >= C_m |u|_H^2,  C_m = 1 - m^{2s}/(omega^2+m^2)^s,
// attained on |k| = 1.
double coercivity_constant(const ProblemParams& p);

// Cross-check: minimizes the Rayleigh quotient over zero-mean fields by
// inverse iteration from a random start; agrees with the closed form to 1e-6.
double coercivity_minimized(const ProblemParams& p, Rng& rng, int iters = 120);

// Geometry of the linking sets: the sphere N_r in the zero-mean subspace,
// the cap M = {y + lambda z : ||v|| <= rho, lambda >= 0} spanned by the
// harmonic constant direction y and z = r w/||w||, where w is the
// product-of-sines test function sin(omega x_1)...sin(omega x_N)/(1+xi).
struct LinkingGeometry {
    ProblemParams params;
    double kappa = 1.0;

    double C_m = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;  // ||w||^2 = (T/2)^N (C2 + m^2 C3), C1 = C2
    double Cbar = 0.0;                    // max{kappa m^{2s},1} max{1, C2+m^2 C3}
    double eps = 0.0;                     // epsilon in the sphere lower bound
    double C_eps = 0.0;
    double Cpp = 0.0;                     // trace constant |u|_{L^{p+1}} <= Cpp ||v||
    double A = 0.0;                       // potential slope, > Cbar/(2 kappa)
    double B_A = 0.0;                     // fitted offset (inf for the zero control)

    double r = 0.0;    // sphere radius
    double rho = 0.0;  // cap radius
    double b_lower = 0.0;  // certified inf of J over N_r
    bool degenerate_cap = false;

    FourierField w_trace;     // trace of w (zero mean)
    double w_xnorm_sq = 0.0;  // closed-form ||w||^2
    double w_trace_l2_sq = 0.0;
    double w_trace_hs_sq = 0.0;
    double w_perp = 0.0;      // norm of the non-harmonic component of w
    double y_unit_c0 = 0.0;   // c_0 giving the unit-norm harmonic constant

    // trace and w-orthogonal component of eta * y_unit + zeta * z_unit
    FourierField plane_trace(double eta, double zeta) const;
    double plane_zperp(double zeta) const;
};

// Certified constants and radii; ties the (F)-bound, the trace constant and
// the coercivity together so J >= b_lower > 0 on N_r and J <= 0 on the rim.
// r_override/A_override support the mass-uniform continuation setup.
LinkingGeometry build_geometry(const ProblemParams& p, const Nonlinearity& nl, double kappa,
                               std::optional<double> r_override = std::nullopt,
                               std::optional<double> A_override = std::nullopt);

// J evaluated at a point of the y-z plane (cap parameterization).
double geometry_value(const Functional& J, const LinkingGeometry& g, double eta, double zeta);

enum class SolveStatus {
    converged,
    converged_to_trivial,
    max_iterations,
    stagnation,
    degenerate_geometry,
};

const char* to_string(SolveStatus s);

struct MinMaxResult {
    FourierField candidate;
    double alpha = 0.0;     // functional level at the candidate
    double residual = 0.0;  // Cerami measure
    std::vector<std::pair<int, double>> path_history;  // (sweep, max level)
    bool converged = false;
    SolveStatus status = SolveStatus::max_iterations;
};

struct SolverConfig {
    int mesh_radial = 40;
    int mesh_angular = 40;
    int max_sweeps = 200;
    int plateau_window = 15;
    double plateau_rel = 1e-10;
    double cerami_tol = 1e-8;
    int max_newton = 200;
    double trivial_floor = 1e-8;  // |u|_H below this is the trivial branch
    std::uint64_t seed = 1234;
    std::ostream* trace = nullptr;  // optional CSV sink (iteration, level, residual)
};

// Deforms a triangulated mesh of the cap by descent sweeps with the boundary
// pinned; the max-over-interior level is nonincreasing by construction and
// the max node is handed to refine() by the driver.
MinMaxResult minmax_search(const Functional& J, const LinkingGeometry& geom,
                           const SolverConfig& cfg);

// Damped, regularized Newton polish of J'(u) = 0 with the multiplier as
// preconditioner; stops at cerami < tol, reports the trivial branch when
// |u|_H collapses below the floor.
MinMaxResult refine(const Functional& J, FourierField candidate, double tol, int max_iter,
                    double trivial_floor = 1e-8, std::ostream* trace = nullptr);

struct SolveOutcome {
    LinkingGeometry geometry;
    MinMaxResult mesh;
    MinMaxResult refined;
};

// build_geometry + minmax_search + refine; what the CLI "solve" verb runs.
SolveOutcome solve_linking(const ProblemParams& p, const Nonlinearity& nl, double kappa,
                           const SolverConfig& cfg);

}  // namespace frac
