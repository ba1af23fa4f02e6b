#include "frac/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>

namespace frac {

const Fft& Fft::plan(const std::vector<int>& dims) {
    static std::map<std::vector<int>, std::unique_ptr<Fft>> registry;
    auto it = registry.find(dims);
    if (it == registry.end())
        it = registry.emplace(dims, std::unique_ptr<Fft>(new Fft(dims))).first;
    return *it->second;
}

Fft::Fft(const std::vector<int>& dims) {
    size_ = 1;
    for (int d : dims) size_ *= static_cast<std::size_t>(d);
    buf_ = fftw_alloc_complex(size_);
    auto* b = static_cast<fftw_complex*>(buf_);
    plan_fwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), b, b, FFTW_FORWARD,
                              FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), b, b, FFTW_BACKWARD,
                              FFTW_ESTIMATE);
}

Fft::~Fft() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

// std::complex<double> is layout-compatible with fftw_complex
void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
    auto* b = static_cast<fftw_complex*>(buf_);
    std::memcpy(static_cast<void*>(b), static_cast<const void*>(in), size_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(b), size_ * sizeof(fftw_complex));
}

void Fft::backward(const std::complex<double>* in, std::complex<double>* out) const {
    auto* b = static_cast<fftw_complex*>(buf_);
    std::memcpy(static_cast<void*>(b), static_cast<const void*>(in), size_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(b), size_ * sizeof(fftw_complex));
}

}  // namespace frac
