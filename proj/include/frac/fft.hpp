#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace frac {

// Plan-caching wrapper around FFTW (complex-to-complex, any rank/size).
// Plans use FFTW_ESTIMATE so planning never times anything: identical inputs
// give identical outputs run-to-run. Transforms copy through internal
// aligned buffers; at desk scale the copies are noise.
//
// Single-threaded by design (plan registry is unsynchronized).
class Fft {
public:
    // Shared plan for the given dimensions (row-major, slowest axis first).
    static const Fft& plan(const std::vector<int>& dims);

    // out_k = sum_j in_j exp(-2*pi*i*<k,j>/M), unnormalized.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    // out_j = sum_k in_k exp(+2*pi*i*<k,j>/M), unnormalized.
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

    std::size_t size() const { return size_; }

    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

private:
    explicit Fft(const std::vector<int>& dims);

    std::size_t size_;
    void* buf_;        // fftw_complex*
    void* plan_fwd_;   // fftw_plan
    void* plan_bwd_;
};

}  // namespace frac
