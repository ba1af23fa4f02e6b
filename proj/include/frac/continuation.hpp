#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "frac/extension.hpp"
#include "frac/linking.hpp"

namespace frac {

// Trace constant of |u|_{L^q} <= C'' ||v|| for zero-mean traces:
//   C'' = (T^{-N/2})^{2/q'-1} omega^{-s} kappa^{-1/2} S^{(2-q')/(2q')},
//   S = sum_{k != 0} |k|^{-2sq'/(2-q')}  (truncated lattice sum + integral
//   tail bound, so the returned value is an upper bound).
// DivergentSum unless q in (2, 2N/(N-2s)) (upper bound +inf at N = 2s).
double hy_constant(const ProblemParams& p, double q, double kappa);

// Mass-uniform level bounds for the small-mass family.
struct ContinuationBounds {
    double m0 = 0.0;      // omega^{2s}/2
    double m_admissible = 0.0;  // min(m0, omega 2^{-1/(2s)}): where the chain is valid
    double b = 0.0;       // 1/4 - eps/omega^{2s} with eps = omega^{2s}/8
    double eps = 0.0;
    double C_eps = 0.0;
    double Cpp = 0.0;
    double Cpp_eps = 0.0;  // composite kappa C_eps Cpp^{p+1}
    double r = 0.0;        // mass-independent sphere radius
    double K1 = 0.0;
    double K2 = 0.0;
    double Cbar_m0 = 0.0;
    double A = 0.0;
    double B_A = 0.0;
    double kappa = 1.0;
};

ContinuationBounds bounds(const ProblemParams& p, const Nonlinearity& nl, double kappa);

// Nontriviality floor: the positive root X of
//   kappa [ (T^N)^{(p-1)/(p+1)} X^2 + (p+3) C_{1/4} X^{p+1} ] = 2 K1,
// a lower bound for |u|_{L^{p+1}} at any level >= K1 critical point.
double nontriviality_floor(const ContinuationBounds& b, const Nonlinearity& nl,
                           const ProblemParams& p);

// Weighted strip estimate: for any delta > 0,
//   int_{xi<delta} xi^{1-2s} v^2 <= delta^{2-2s}/(1-s) |v(.,0)|^2_{L2}
//                                  + delta^2/(2s) ||dv/dxi||^2.
struct StripReport {
    double lhs = 0.0;
    double trace_term = 0.0;
    double grad_term = 0.0;
    double slack = 0.0;  // rhs - lhs >= 0
    bool holds = false;
};

StripReport strip_bound_check(const ExtensionField& v, double delta);

struct ContinuationConfig {
    SolverConfig solver;
    double level_tol = 1e-8;     // slack on K1 <= alpha_m <= K2
    double residual_tol = 1e-5;  // final m = 0 equation residual
    bool warm_start = true;
    std::ostream* summary_csv = nullptr;  // m, alpha, residual, l2, lp1
};

struct MassStep {
    double m = 0.0;
    double alpha = 0.0;
    double residual = 0.0;
    double l2 = 0.0;
    double lp1 = 0.0;
    double xnorm = 0.0;
    // slack of the running-norm inequalities (each must be >= 0)
    double grad_slack = 0.0;   // ||v||^2 - ||grad v||^2
    double semi_slack = 0.0;   // kappa^{-1/2}||v|| - [u]
    double mass_slack = 0.0;   // ||v||^2 - 2 kappa (|u|^2_{L2} - B_1 T^N)
    SolveStatus status = SolveStatus::max_iterations;
};

struct ContinuationReport {
    ContinuationBounds bounds;
    std::vector<MassStep> steps;
    std::vector<FourierField> fields;  // per-mass solutions, aligned with steps
    FourierField u0;        // m = 0 limit field
    double residual0 = 0.0; // dual-norm residual of the m = 0 equation
    double u0_lp1 = 0.0;
    double floor_lp1 = 0.0;
    std::string to_json() const;
};

// Runs the linking solve along a decreasing mass schedule (all below m0),
// checks K1 <= alpha_m <= K2 per step, then drives the m = 0 equation from
// the last solution and verifies nontriviality of the limit.
// LevelOutOfBounds / TrivialLimit on violation.
ContinuationReport run_continuation(const ProblemParams& p_template, const Nonlinearity& nl,
                                    double kappa, std::vector<double> schedule,
                                    const ContinuationConfig& cfg);

}  // namespace frac
