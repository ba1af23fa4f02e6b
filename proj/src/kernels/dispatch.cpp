#include <cstdlib>
#include <cstring>

#include "frac/kernels.hpp"

namespace frac::kernels {

const Ops* avx2_ops_impl();  // kernels_avx2.cpp; nullptr off x86-64

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* resolve() {
    const char* force = std::getenv("FRAC_KERNELS");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return &scalar_ops();
        if (std::strcmp(force, "avx2") == 0 && avx2_ops_impl() != nullptr && cpu_has_avx2())
            return avx2_ops_impl();
        return &scalar_ops();
    }
    if (avx2_ops_impl() != nullptr && cpu_has_avx2()) return avx2_ops_impl();
    return &scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops* ops = resolve();
    return *ops;
}

bool has_avx2() { return avx2_ops_impl() != nullptr && cpu_has_avx2(); }

const Ops* avx2_ops() { return has_avx2() ? avx2_ops_impl() : nullptr; }

}  // namespace frac::kernels
