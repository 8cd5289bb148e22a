// AVX2 (+FMA) kernel variants. Loop structure mirrors kernels_scalar.cpp:
// matmul_acc / matmul_tn_acc keep the scalar per-element accumulation order
// over k (vector lanes hold independent output columns), so they differ from
// the reference only by FMA rounding. Dot-product and reduction kernels use
// four lanes combined in a fixed order at the end.
//
// This file is only compiled on x86-64 (see src/CMakeLists.txt) and is only
// dispatched to after a cpuid check.

#include "drcn/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace drcn::kernels {

namespace {

// Sums the four lanes in a fixed (low-to-high pairwise) order.
inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);           // {l0+h0, l1+h1}
    const __m128d swap = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swap));
}

// Shared body for matmul_acc (transposed_a = false) and matmul_tn_acc
// (transposed_a = true, A stored (K,M)). Column tiles are the outer loop so
// the touched B panel (K rows x 16 doubles) stays cache-resident across all
// M output rows, and output rows are processed in pairs to amortize the B
// loads; per output element the k-accumulation order is unchanged.
template <bool transposed_a, bool accumulate>
void matmul_body(double* C, const double* A, const double* B,
                 int M, int K, int N) {
    const __m256d zero = _mm256_setzero_pd();
    (void)zero;
    auto a_at = [&](int m, int k) {
        return transposed_a ? A[static_cast<std::int64_t>(k) * M + m]
                            : A[static_cast<std::int64_t>(m) * K + k];
    };
    const int n16 = N - (N % 16);
    const int n4 = N - (N % 4);
    const int m2 = M - (M % 2);
    for (int n = 0; n < n16; n += 16) {
        for (int m = 0; m < m2; m += 2) {
            double* c0 = C + static_cast<std::int64_t>(m) * N + n;
            double* c1 = c0 + N;
            __m256d a00 = accumulate ? _mm256_loadu_pd(c0) : zero;
            __m256d a01 = accumulate ? _mm256_loadu_pd(c0 + 4) : zero;
            __m256d a02 = accumulate ? _mm256_loadu_pd(c0 + 8) : zero;
            __m256d a03 = accumulate ? _mm256_loadu_pd(c0 + 12) : zero;
            __m256d a10 = accumulate ? _mm256_loadu_pd(c1) : zero;
            __m256d a11 = accumulate ? _mm256_loadu_pd(c1 + 4) : zero;
            __m256d a12 = accumulate ? _mm256_loadu_pd(c1 + 8) : zero;
            __m256d a13 = accumulate ? _mm256_loadu_pd(c1 + 12) : zero;
            for (int k = 0; k < K; ++k) {
                const __m256d av0 = _mm256_set1_pd(a_at(m, k));
                const __m256d av1 = _mm256_set1_pd(a_at(m + 1, k));
                const double* b = B + static_cast<std::int64_t>(k) * N + n;
                const __m256d b0 = _mm256_loadu_pd(b);
                const __m256d b1 = _mm256_loadu_pd(b + 4);
                const __m256d b2 = _mm256_loadu_pd(b + 8);
                const __m256d b3 = _mm256_loadu_pd(b + 12);
                a00 = _mm256_fmadd_pd(av0, b0, a00);
                a01 = _mm256_fmadd_pd(av0, b1, a01);
                a02 = _mm256_fmadd_pd(av0, b2, a02);
                a03 = _mm256_fmadd_pd(av0, b3, a03);
                a10 = _mm256_fmadd_pd(av1, b0, a10);
                a11 = _mm256_fmadd_pd(av1, b1, a11);
                a12 = _mm256_fmadd_pd(av1, b2, a12);
                a13 = _mm256_fmadd_pd(av1, b3, a13);
            }
            _mm256_storeu_pd(c0, a00);
            _mm256_storeu_pd(c0 + 4, a01);
            _mm256_storeu_pd(c0 + 8, a02);
            _mm256_storeu_pd(c0 + 12, a03);
            _mm256_storeu_pd(c1, a10);
            _mm256_storeu_pd(c1 + 4, a11);
            _mm256_storeu_pd(c1 + 8, a12);
            _mm256_storeu_pd(c1 + 12, a13);
        }
        for (int m = m2; m < M; ++m) {
            double* c0 = C + static_cast<std::int64_t>(m) * N + n;
            __m256d a00 = accumulate ? _mm256_loadu_pd(c0) : zero;
            __m256d a01 = accumulate ? _mm256_loadu_pd(c0 + 4) : zero;
            __m256d a02 = accumulate ? _mm256_loadu_pd(c0 + 8) : zero;
            __m256d a03 = accumulate ? _mm256_loadu_pd(c0 + 12) : zero;
            for (int k = 0; k < K; ++k) {
                const __m256d av = _mm256_set1_pd(a_at(m, k));
                const double* b = B + static_cast<std::int64_t>(k) * N + n;
                a00 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b), a00);
                a01 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b + 4), a01);
                a02 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b + 8), a02);
                a03 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b + 12), a03);
            }
            _mm256_storeu_pd(c0, a00);
            _mm256_storeu_pd(c0 + 4, a01);
            _mm256_storeu_pd(c0 + 8, a02);
            _mm256_storeu_pd(c0 + 12, a03);
        }
    }
    for (int n = n16; n < n4; n += 4) {
        for (int m = 0; m < M; ++m) {
            double* c_row = C + static_cast<std::int64_t>(m) * N;
            __m256d acc = accumulate ? _mm256_loadu_pd(c_row + n) : zero;
            for (int k = 0; k < K; ++k) {
                const double* b = B + static_cast<std::int64_t>(k) * N + n;
                acc = _mm256_fmadd_pd(_mm256_set1_pd(a_at(m, k)), _mm256_loadu_pd(b), acc);
            }
            _mm256_storeu_pd(c_row + n, acc);
        }
    }
    for (int n = n4; n < N; ++n) {
        for (int m = 0; m < M; ++m) {
            double acc = accumulate ? C[static_cast<std::int64_t>(m) * N + n] : 0.0;
            for (int k = 0; k < K; ++k) {
                acc = std::fma(a_at(m, k), B[static_cast<std::int64_t>(k) * N + n], acc);
            }
            C[static_cast<std::int64_t>(m) * N + n] = acc;
        }
    }
}

void matmul_acc_avx2(double* C, const double* A, const double* B,
                     int M, int K, int N) {
    matmul_body<false, true>(C, A, B, M, K, N);
}

void matmul_tn_acc_avx2(double* C, const double* A, const double* B,
                        int M, int K, int N) {
    matmul_body<true, true>(C, A, B, M, K, N);
}

void matmul_tn_avx2(double* C, const double* A, const double* B,
                    int M, int K, int N) {
    matmul_body<true, false>(C, A, B, M, K, N);
}

inline double dot_avx2(const double* a, const double* b, int n) {
    // Four independent accumulators hide the FMA latency; they are combined
    // in a fixed order at the end.
    const int n16 = n - (n % 16);
    const int n4 = n - (n % 4);
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    for (int k = 0; k < n16; k += 16) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
        s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), s2);
        s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), s3);
    }
    __m256d acc = _mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3));
    for (int k = n16; k < n4; k += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc);
    }
    double total = hsum(acc);
    for (int k = n4; k < n; ++k) total += a[k] * b[k];
    return total;
}

void matmul_nt_acc_avx2(double* C, const double* A, const double* B,
                        int M, int K, int N) {
    // n-tiled so the touched B rows stay cache-resident across the m loop.
    constexpr int kTile = 8;
    for (int n0 = 0; n0 < N; n0 += kTile) {
        const int n1 = n0 + kTile < N ? n0 + kTile : N;
        for (int m = 0; m < M; ++m) {
            const double* a_row = A + static_cast<std::int64_t>(m) * K;
            double* c_row = C + static_cast<std::int64_t>(m) * N;
            for (int n = n0; n < n1; ++n) {
                c_row[n] += dot_avx2(a_row, B + static_cast<std::int64_t>(n) * K, K);
            }
        }
    }
}

void row_sums_acc_avx2(double* out, const double* A, int M, int N) {
    const int n4 = N - (N % 4);
    for (int m = 0; m < M; ++m) {
        const double* row = A + static_cast<std::int64_t>(m) * N;
        __m256d acc = _mm256_setzero_pd();
        for (int n = 0; n < n4; n += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + n));
        double total = hsum(acc);
        for (int n = n4; n < N; ++n) total += row[n];
        out[m] += total;
    }
}

void add_avx2(double* y, const double* a, const double* b, std::int64_t n) {
    const std::int64_t n4 = n - (n % 4);
    for (std::int64_t i = 0; i < n4; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                              _mm256_loadu_pd(b + i)));
    }
    for (std::int64_t i = n4; i < n; ++i) y[i] = a[i] + b[i];
}

void axpy_acc_avx2(double* y, double alpha, const double* x, std::int64_t n) {
    const std::int64_t n4 = n - (n % 4);
    const __m256d av = _mm256_set1_pd(alpha);
    for (std::int64_t i = 0; i < n4; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                                _mm256_loadu_pd(y + i)));
    }
    for (std::int64_t i = n4; i < n; ++i) y[i] += alpha * x[i];
}

double sum_avx2(const double* x, std::int64_t n) {
    const std::int64_t n4 = n - (n % 4);
    __m256d acc = _mm256_setzero_pd();
    for (std::int64_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum(acc);
    for (std::int64_t i = n4; i < n; ++i) total += x[i];
    return total;
}

double sumsq_dev_avx2(const double* x, double mu, std::int64_t n) {
    const std::int64_t n4 = n - (n % 4);
    const __m256d mv = _mm256_set1_pd(mu);
    __m256d acc = _mm256_setzero_pd();
    for (std::int64_t i = 0; i < n4; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (std::int64_t i = n4; i < n; ++i) {
        const double d = x[i] - mu;
        total += d * d;
    }
    return total;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::int64_t n) {
    const std::int64_t n4 = n - (n % 4);
    __m256d acc = _mm256_setzero_pd();
    for (std::int64_t i = 0; i < n4; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (std::int64_t i = n4; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

void adam_update_avx2(double* p, double* m, double* v, const double* g,
                      std::int64_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2) {
    const std::int64_t n4 = n - (n % 4);
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d one_m_b1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d one_m_b2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d bc1v = _mm256_set1_pd(bc1);
    const __m256d bc2v = _mm256_set1_pd(bc2);
    const __m256d epsv = _mm256_set1_pd(eps);
    const __m256d lrv = _mm256_set1_pd(lr);
    // Each step is the same sequence of correctly-rounded IEEE ops as the
    // scalar kernel (no FMA), so both backends agree bitwise here.
    for (std::int64_t i = 0; i < n4; i += 4) {
        const __m256d gv = _mm256_loadu_pd(g + i);
        const __m256d mv = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(one_m_b1, gv));
        const __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(one_m_b2, _mm256_mul_pd(gv, gv)));
        _mm256_storeu_pd(m + i, mv);
        _mm256_storeu_pd(v + i, vv);
        const __m256d m_hat = _mm256_div_pd(mv, bc1v);
        const __m256d v_hat = _mm256_div_pd(vv, bc2v);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(v_hat), epsv);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, m_hat), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
    }
    for (std::int64_t i = n4; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

}  // namespace

const Ops& avx2_ops_impl() {
    static const Ops ops = {
        "avx2",
        matmul_acc_avx2,
        matmul_tn_acc_avx2,
        matmul_tn_avx2,
        matmul_nt_acc_avx2,
        row_sums_acc_avx2,
        add_avx2,
        axpy_acc_avx2,
        sum_avx2,
        sumsq_dev_avx2,
        sum_sq_diff_avx2,
        adam_update_avx2,
    };
    return ops;
}

}  // namespace drcn::kernels

#endif  // x86-64
