#pragma once

namespace frac::bessel {

struct KPair {
    double k_nu;    // K_nu(x)
    double k_nup1;  // K_{nu+1}(x)
};

// Modified Bessel function of the second kind for order nu in (0,1), x > 0.
// Temme's series below x = 2, Thompson-Barnett continued fraction above;
// relative accuracy ~1e-13 over x in [1e-12, 700].
KPair k_pair(double nu, double x);

double k_nu(double nu, double x);

}  // namespace frac::bessel
