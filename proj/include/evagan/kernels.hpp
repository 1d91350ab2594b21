#pragma once

#include <cstddef>
#include <cstdint>

namespace evagan::kernels {

// Data-parallel inner loops behind the layer math. Every kernel exists as a
// plain scalar reference and, where profitable, an AVX2+FMA variant. The
// active table is picked once at startup from cpuid and can be overridden
// (deterministic mode pins the scalar table so results are reproducible
// across machines, not just across runs).

struct KernelTable {
    // c[M x N] = a[M x K] * b[K x N]
    void (*gemm_nn)(double* c, const double* a, const double* b,
                    std::size_t m, std::size_t k, std::size_t n);
    // c[M x N] += a[K x M]^T * b[K x N]   (weight-gradient shape: X^T * dY)
    void (*gemm_tn_acc)(double* c, const double* a, const double* b,
                        std::size_t m, std::size_t k, std::size_t n);
    // c[M x N] = a[M x K] * b[N x K]^T    (input-gradient shape: dY * W^T)
    void (*gemm_nt)(double* c, const double* a, const double* b,
                    std::size_t m, std::size_t k, std::size_t n);

    void (*relu)(double* y, const double* x, std::size_t n);
    void (*leaky_relu)(double* y, const double* x, double slope, std::size_t n);
    // dx = dy where x > 0 else dy * slope (slope 0 for plain relu)
    void (*leaky_relu_grad)(double* dx, const double* dy, const double* x, double slope,
                            std::size_t n);
    // y += x
    void (*add)(double* y, const double* x, std::size_t n);
    // y = y * a + b (elementwise with scalars)
    void (*scale_add)(double* y, double a, double b, std::size_t n);
    // Fused Adam update for one parameter tensor; corr1/corr2 are the
    // bias-correction factors 1 - beta^t.
    void (*adam_update)(double* p, double* m, double* v, const double* g, std::size_t n,
                        double lr, double beta1, double beta2, double eps,
                        double corr1, double corr2);
};

enum class Backend { scalar, avx2 };

extern const KernelTable scalar_table;
extern const KernelTable avx2_table;

bool avx2_supported();

// Active table. Defaults to the best supported backend.
const KernelTable& active();
Backend active_backend();
void force_backend(Backend b);
// Re-detect and pick the best backend (undoes force_backend).
void autoselect_backend();

} // namespace evagan::kernels
