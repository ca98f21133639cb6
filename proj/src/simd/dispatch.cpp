#include "unfold/simd/dispatch.hpp"

#include "unfold/types.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace unfold::kern {

#ifdef UNFOLD_BUILD_AVX2
const Table& avx2_table_impl();  // defined in the -mavx2 translation unit
#endif

bool avx2_supported() {
#if defined(UNFOLD_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* avx2_table() {
#ifdef UNFOLD_BUILD_AVX2
    if (avx2_supported()) return &avx2_table_impl();
#endif
    return nullptr;
}

namespace {

std::atomic<const Table*> g_active{nullptr};

const Table* resolve(const char* request) {
    if (request == nullptr || std::strcmp(request, "auto") == 0) {
        const Table* v = avx2_table();
        return v ? v : &scalar_table();
    }
    if (std::strcmp(request, "scalar") == 0) return &scalar_table();
    if (std::strcmp(request, "avx2") == 0) {
        const Table* v = avx2_table();
        if (!v)
            throw unsupported_operation(
                "UNFOLD_SIMD=avx2 requested but AVX2+FMA is unavailable on this machine/build");
        return v;
    }
    throw invalid_parameter(std::string("unknown SIMD backend '") + request +
                            "' (expected auto, scalar or avx2)");
}

}  // namespace

const Table& active() {
    const Table* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = resolve(std::getenv("UNFOLD_SIMD"));
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void force_backend(const char* name) {
    g_active.store(resolve(name), std::memory_order_release);
}

}  // namespace unfold::kern
