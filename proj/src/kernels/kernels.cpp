#include "codedet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace codedet::kernels {

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

namespace {

const Backend* pick_default() {
    if (const char* env = std::getenv("CODEDET_KERNELS")) {
        const std::string_view want(env);
        if (want == "scalar") return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
        if (want == "avx2" && cpu_has_avx2()) return &avx2_backend();
#endif
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &avx2_backend();
#endif
    return &scalar_backend();
}

std::atomic<const Backend*>& active_slot() {
    static std::atomic<const Backend*> slot{pick_default()};
    return slot;
}

}  // namespace

const Backend& active() { return *active_slot().load(std::memory_order_relaxed); }

bool select_backend(std::string_view name) {
    if (name == "scalar") {
        active_slot().store(&scalar_backend(), std::memory_order_relaxed);
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && cpu_has_avx2()) {
        active_slot().store(&avx2_backend(), std::memory_order_relaxed);
        return true;
    }
#endif
    return false;
}

}  // namespace codedet::kernels
