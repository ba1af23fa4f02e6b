#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "frac/kernels.hpp"

// AVX2/FMA variants. Each __m256d carries two interleaved complex doubles.
// Compiled via target attributes so the rest of the build stays generic.

namespace frac::kernels {
namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [w0, w1] -> [w0, w0, w1, w1]
__attribute__((target("avx2,fma"))) inline __m256d dup_pairs(const double* w) {
    __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(v, 0x50);
}

__attribute__((target("avx2,fma"))) void cmul_real_v(cdouble* c, const double* w, std::size_t n) {
    double* p = reinterpret_cast<double*>(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d cv = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(cv, dup_pairs(w + i)));
    }
    for (; i < n; ++i) c[i] *= w[i];
}

__attribute__((target("avx2,fma"))) double weighted_norm_sq_v(const cdouble* c, const double* w,
                                                              std::size_t n) {
    const double* p = reinterpret_cast<const double*>(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d cv = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(cv, cv), dup_pairs(w + i), acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const double re = c[i].real(), im = c[i].imag();
        out += w[i] * (re * re + im * im);
    }
    return out;
}

__attribute__((target("avx2,fma"))) double norm_sq_v(const cdouble* c, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d cv = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_fmadd_pd(cv, cv, acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const double re = c[i].real(), im = c[i].imag();
        out += re * re + im * im;
    }
    return out;
}

__attribute__((target("avx2,fma"))) void axpy_v(cdouble* y, double a, const cdouble* x,
                                                std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d yv = _mm256_loadu_pd(py + 2 * i);
        __m256d xv = _mm256_loadu_pd(px + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_fmadd_pd(av, xv, yv));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void scale_v(cdouble* y, double a, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(py + 2 * i, _mm256_mul_pd(av, _mm256_loadu_pd(py + 2 * i)));
    for (; i < n; ++i) y[i] *= a;
}

__attribute__((target("avx2,fma"))) double dot_re_v(const cdouble* a, const cdouble* b,
                                                    std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i), acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i)
        out += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return out;
}

__attribute__((target("avx2,fma"))) double sum_v(const double* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    double out = hsum(acc);
    for (; i < n; ++i) out += v[i];
    return out;
}

const Ops kAvx2 = {
    "avx2", cmul_real_v, weighted_norm_sq_v, norm_sq_v, axpy_v, scale_v, dot_re_v, sum_v,
};

}  // namespace

const Ops* avx2_ops_impl() { return &kAvx2; }

}  // namespace frac::kernels

#else

#include "frac/kernels.hpp"

namespace frac::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace frac::kernels

#endif
