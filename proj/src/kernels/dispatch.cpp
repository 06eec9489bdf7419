#include <cstdlib>
#include <cstring>

#include "iaspa/kernels.hpp"

namespace iaspa::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops& selected = []() -> const Ops& {
        if (const char* env = std::getenv("IASPA_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
            if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return avx2_ops();
#endif
        }
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
        if (avx2_supported()) return avx2_ops();
#endif
        return scalar_ops();
    }();
    return selected;
}

std::vector<const Ops*> supported_ops() {
    std::vector<const Ops*> out{&scalar_ops()};
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
    if (avx2_supported()) out.push_back(&avx2_ops());
#endif
    return out;
}

}  // namespace iaspa::kernels
