#pragma once

#include <functional>
#include <vector>

namespace frac::quad {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order and cached.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

using Fn = std::function<double(double)>;

double panel(const Fn& f, double a, double b, int n = 20);
double panels(const Fn& f, const std::vector<double>& edges, int n = 20);

// Edges on [a,b] geometrically refined toward a (first panel ~ b*ratio^levels).
std::vector<double> geometric_edges(double a, double b, int levels, double ratio = 0.5);

// Bisecting adaptive Gauss-Legendre.
double adaptive(const Fn& f, double a, double b, double tol, int n = 20, int max_depth = 30);

// Integral over [0, upper] of an integrand with an integrable algebraic
// singularity at 0: graded panels near 0 followed by unit panels.
double singular_lower_endpoint(const Fn& f, double upper, double tol = 1e-13);

}  // namespace frac::quad
