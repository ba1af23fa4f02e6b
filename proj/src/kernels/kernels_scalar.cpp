#include "frac/kernels.hpp"

namespace frac::kernels {
namespace {

void cmul_real_s(cdouble* c, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) c[i] *= w[i];
}

double weighted_norm_sq_s(const cdouble* c, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = c[i].real(), im = c[i].imag();
        acc += w[i] * (re * re + im * im);
    }
    return acc;
}

double norm_sq_s(const cdouble* c, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = c[i].real(), im = c[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

void axpy_s(cdouble* y, double a, const cdouble* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_s(cdouble* y, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

double dot_re_s(const cdouble* a, const cdouble* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
}

double sum_s(const double* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
}

const Ops kScalar = {
    "scalar", cmul_real_s, weighted_norm_sq_s, norm_sq_s, axpy_s, scale_s, dot_re_s, sum_s,
};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

}  // namespace frac::kernels
