#include "evagan/kernels.hpp"

namespace evagan::kernels {
namespace {

Backend detect() {
#if defined(__x86_64__) || defined(__i386__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend g_backend = detect();

} // namespace

bool avx2_supported() { return detect() == Backend::avx2; }

const KernelTable& active() {
    return g_backend == Backend::avx2 ? avx2_table : scalar_table;
}

Backend active_backend() { return g_backend; }

void force_backend(Backend b) { g_backend = b; }

void autoselect_backend() { g_backend = detect(); }

} // namespace evagan::kernels
