#pragma once

#include <cstdint>

// Arithmetic inner loops behind the layers, the loss, and the optimizer.
// Every kernel exists twice: a scalar reference implementation and an AVX2
// variant, selected once at startup (or forced via DRCN_KERNELS / the API
// below). Each kernel uses a fixed reduction order, so results are
// bit-reproducible run to run for a given backend; the equivalence of the
// two backends is asserted by tests/test_kernels.cpp.

namespace drcn::kernels {

enum class Backend { scalar, avx2 };

struct Ops {
    const char* name;

    /// C(M,N) += A(M,K) * B(K,N), all row-major. Accumulation over k runs in
    /// ascending order for every output element.
    void (*matmul_acc)(double* C, const double* A, const double* B,
                       int M, int K, int N);

    /// C(M,N) += A(K,M)^T * B(K,N): A is stored (K,M) row-major.
    void (*matmul_tn_acc)(double* C, const double* A, const double* B,
                          int M, int K, int N);

    /// C(M,N) = A(K,M)^T * B(K,N): overwrite variant (C is not read).
    void (*matmul_tn)(double* C, const double* A, const double* B,
                      int M, int K, int N);

    /// C(M,N) += A(M,K) * B(N,K)^T: row-row dot products.
    void (*matmul_nt_acc)(double* C, const double* A, const double* B,
                          int M, int K, int N);

    /// out[m] += sum_n A[m][n]
    void (*row_sums_acc)(double* out, const double* A, int M, int N);

    /// y[i] = a[i] + b[i]
    void (*add)(double* y, const double* a, const double* b, std::int64_t n);

    /// y[i] += alpha * x[i]
    void (*axpy_acc)(double* y, double alpha, const double* x, std::int64_t n);

    double (*sum)(const double* x, std::int64_t n);

    /// sum_i (x[i] - mu)^2
    double (*sumsq_dev)(const double* x, double mu, std::int64_t n);

    /// sum_i (a[i] - b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::int64_t n);

    /// One bias-corrected Adam update over a flat parameter array:
    ///   m = beta1*m + (1-beta1)*g;  v = beta2*v + (1-beta2)*g^2
    ///   p -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
    /// bc1/bc2 are the bias-correction denominators 1-beta^t.
    void (*adam_update)(double* p, double* m, double* v, const double* g,
                        std::int64_t n, double lr, double beta1, double beta2,
                        double eps, double bc1, double bc2);
};

const Ops& scalar_ops();

/// True when the AVX2 variant is compiled in and the CPU reports AVX2.
bool avx2_supported();
const Ops& avx2_ops();  // throws Error if unavailable

/// The active backend: forced value if set, else DRCN_KERNELS env var
/// ("scalar" or "avx2"), else avx2 when supported.
const Ops& active();
Backend active_backend();
void force_backend(Backend b);  // throws if b is unavailable
void clear_forced_backend();

}  // namespace drcn::kernels
