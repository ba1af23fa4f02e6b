#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace frac {

// Two-point boundary value problem the extension decouples into per mode:
//   -(xi^{1-2s} w')' + lambda^2 xi^{1-2s} w = 0  on (0, Xi),
//   w(0) = 1,  w(Xi) = 0,
// on a graded grid xi_j = Xi (j/J)^beta clustering at the degenerate end.
// Solved with Bessel-free finite differences; recovers the symbol
// kappa_s lambda^{2s} as an independent check on the profile machinery.
struct ModeProblem {
    double lambda;
    double s;
    double height;
    std::vector<double> nodes;  // strictly increasing, nodes.front() = 0

    static ModeProblem graded(double lambda, double s, double height, int J, double beta = 2.0);
    void validate() const;
};

// Nodal values of the flux-conservative three-point scheme; the weight is
// integrated exactly across faces and cells, so xi = 0 needs no special
// handling. Solution is in [0,1] and nonincreasing.
std::vector<double> solve_mode(const ModeProblem& mp);

// Discrete conormal derivative at 0: face fluxes of the first cells
// extrapolated with the same {1, xi^{2-2s}, xi^2} rule used on the exact
// profile, with the basis averaged across each face in flux form.
// Contract: ~ kappa_s * lambda^{2s}.
double dtn_symbol(const ModeProblem& mp, std::span<const double> profile,
                  double* residual = nullptr);

// Discrete weighted energy (flux form); equals the conormal derivative for
// the exact solution and converges to kappa_s lambda^{2s}.
double discrete_energy(const ModeProblem& mp, std::span<const double> profile);

struct ConvergenceRow {
    int J;
    double lambda;
    double s;
    double symbol;
    double error;  // relative, vs kappa_s lambda^{2s}
    double order;  // observed, vs previous row (0 for the first)
};

std::vector<ConvergenceRow> convergence_study(double lambda, double s, double height,
                                              std::span<const int> Js, double beta = 2.0);

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows);

}  // namespace frac
