#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops used by the field algebra. Every operation has a
// scalar reference implementation and (on x86-64) an AVX2 variant; the active
// set is picked once at startup from CPUID, overridable with FRAC_KERNELS=
// scalar|avx2 for the equivalence tests.
//
// Reductions may associate differently between lanes; callers must not rely
// on bit-equality between implementations (the dispatch itself is stable for
// a given machine, which is what run-to-run determinism needs).

namespace frac::kernels {

using cdouble = std::complex<double>;

struct Ops {
    const char* name;
    // c[i] *= w[i]
    void (*cmul_real)(cdouble* c, const double* w, std::size_t n);
    // sum w[i] * |c[i]|^2
    double (*weighted_norm_sq)(const cdouble* c, const double* w, std::size_t n);
    // sum |c[i]|^2
    double (*norm_sq)(const cdouble* c, std::size_t n);
    // y[i] += a * x[i]
    void (*axpy)(cdouble* y, double a, const cdouble* x, std::size_t n);
    // y[i] *= a
    void (*scale)(cdouble* y, double a, std::size_t n);
    // sum Re(a[i] * conj(b[i]))
    double (*dot_re)(const cdouble* a, const cdouble* b, std::size_t n);
    // sum v[i]
    double (*sum)(const double* v, std::size_t n);
};

// Active implementation (resolved once, thread-safe in C++11 static sense).
const Ops& active();

// Named implementations, always available for direct comparison.
const Ops& scalar_ops();
bool has_avx2();          // compiled in *and* supported by this CPU
const Ops* avx2_ops();    // nullptr when unavailable

}  // namespace frac::kernels
