#include "drcn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "drcn/errors.hpp"

namespace {
// Training churns through multi-megabyte tensor buffers every step; keep
// them on the heap instead of round-tripping each one through mmap and the
// page-fault path.
struct MallocTuning {
    MallocTuning() {
#if defined(__GLIBC__)
        mallopt(M_MMAP_MAX, 0);
        mallopt(M_TRIM_THRESHOLD, -1);
#endif
    }
} malloc_tuning;
}  // namespace

namespace drcn::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops_impl();  // defined in kernels_avx2.cpp
#define DRCN_HAVE_AVX2_KERNELS 1
#else
#define DRCN_HAVE_AVX2_KERNELS 0
#endif

namespace {

std::atomic<int> g_forced{-1};  // -1 = not forced

bool cpu_has_avx2() {
#if DRCN_HAVE_AVX2_KERNELS
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend default_backend() {
    if (const char* env = std::getenv("DRCN_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_supported()) {
                throw Error("DRCN_KERNELS=avx2 but AVX2 kernels are unavailable");
            }
            return Backend::avx2;
        }
        if (std::strcmp(env, "auto") != 0) {
            throw Error(std::string("unknown DRCN_KERNELS value '") + env +
                        "' (expected scalar, avx2 or auto)");
        }
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

bool avx2_supported() {
#if DRCN_HAVE_AVX2_KERNELS
    static const bool ok = cpu_has_avx2();
    return ok;
#else
    return false;
#endif
}

const Ops& avx2_ops() {
#if DRCN_HAVE_AVX2_KERNELS
    if (!avx2_supported()) throw Error("AVX2 kernels unavailable on this CPU");
    return avx2_ops_impl();
#else
    throw Error("AVX2 kernels not compiled into this build");
#endif
}

Backend active_backend() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Backend>(forced);
    static const Backend picked = default_backend();
    return picked;
}

const Ops& active() {
    return active_backend() == Backend::avx2 ? avx2_ops() : scalar_ops();
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported()) {
        throw Error("cannot force AVX2 kernels: unavailable");
    }
    g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void clear_forced_backend() { g_forced.store(-1, std::memory_order_relaxed); }

}  // namespace drcn::kernels
