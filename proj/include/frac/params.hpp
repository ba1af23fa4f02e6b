#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "frac/errors.hpp"

namespace frac {

// Parameters of the periodic problem on (0,T)^N.
//
//   N  space dimension (N >= 2s; at N = 2s the critical exponent is +inf)
//   T  period per axis
//   s  fractional order in (0,1]; s = 1 is admitted only as the classical
//      endpoint used by finite-difference cross-checks
//   m  mass >= 0
//   K  Fourier cutoff: retained modes have |k|_inf <= K
//   M  grid points per axis, M >= 2K+2 so retained modes never alias
//
// omega = 2*pi/T is always derived from T.
struct ProblemParams {
    int N = 1;
    double T = 2.0 * M_PI;
    double s = 0.5;
    double m = 1.0;
    int K = 16;
    int M = 64;

    double omega() const { return 2.0 * M_PI / T; }

    int side() const { return 2 * K + 1; }

    std::size_t mode_count() const {
        std::size_t n = 1;
        for (int d = 0; d < N; ++d) n *= static_cast<std::size_t>(side());
        return n;
    }

    std::size_t grid_count() const {
        std::size_t n = 1;
        for (int d = 0; d < N; ++d) n *= static_cast<std::size_t>(M);
        return n;
    }

    // Symbol of (-Delta + m^2)^s at multi-index with |k|^2 = ksq.
    double symbol(double ksq) const {
        const double w = omega();
        return std::pow(w * w * ksq + m * m, s);
    }

    double mass_shift() const { return m > 0.0 ? std::pow(m, 2.0 * s) : 0.0; }

    // 2N/(N-2s), or +inf at the N = 2s endpoint.
    double critical_exponent() const {
        if (static_cast<double>(N) <= 2.0 * s) return std::numeric_limits<double>::infinity();
        return 2.0 * N / (N - 2.0 * s);
    }

    void validate() const {
        if (N < 1 || N > 4) throw InvalidParams("ProblemParams: N must be in [1,4], got " + std::to_string(N));
        if (!(T > 0.0)) throw InvalidParams("ProblemParams: T must be positive");
        if (!(s > 0.0) || s > 1.0) throw InvalidParams("ProblemParams: s must lie in (0,1]");
        if (m < 0.0) throw InvalidParams("ProblemParams: m must be nonnegative");
        if (static_cast<double>(N) < 2.0 * s)
            throw InvalidParams("ProblemParams: need N >= 2s");
        if (K < 1) throw InvalidParams("ProblemParams: K must be >= 1");
        if (M < 2 * K + 2)
            throw InvalidParams("ProblemParams: M must be >= 2K+2 to keep retained modes alias-free");
        if (mode_count() > (std::size_t{1} << 26) || grid_count() > (std::size_t{1} << 26))
            throw InvalidParams("ProblemParams: mode/grid count exceeds desk scale");
    }

    ProblemParams with_mass(double mass) const {
        ProblemParams q = *this;
        q.m = mass;
        return q;
    }
};

inline bool operator==(const ProblemParams& a, const ProblemParams& b) {
    return a.N == b.N && a.T == b.T && a.s == b.s && a.m == b.m && a.K == b.K && a.M == b.M;
}

}  // namespace frac
