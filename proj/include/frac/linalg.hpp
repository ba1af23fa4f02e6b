#pragma once

#include <vector>

namespace frac {

// Solves the dense system A x = b in place (partial pivoting); A is n x n
// row-major and is destroyed. Returns false on a vanishing pivot.
bool lu_solve(std::vector<double>& A, std::vector<double>& b, int n);

}  // namespace frac
