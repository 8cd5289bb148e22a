// Scalar reference kernels. These define the semantics (loop structure and
// reduction order) that the SIMD variants must reproduce; keep them simple
// and obviously correct.

#include <cmath>

#include "drcn/kernels.hpp"

namespace drcn::kernels {

namespace {

void matmul_acc_scalar(double* C, const double* A, const double* B,
                       int M, int K, int N) {
    for (int m = 0; m < M; ++m) {
        double* c_row = C + static_cast<std::int64_t>(m) * N;
        const double* a_row = A + static_cast<std::int64_t>(m) * K;
        for (int k = 0; k < K; ++k) {
            const double a = a_row[k];
            const double* b_row = B + static_cast<std::int64_t>(k) * N;
            for (int n = 0; n < N; ++n) c_row[n] += a * b_row[n];
        }
    }
}

void matmul_tn_acc_scalar(double* C, const double* A, const double* B,
                          int M, int K, int N) {
    for (int m = 0; m < M; ++m) {
        double* c_row = C + static_cast<std::int64_t>(m) * N;
        for (int k = 0; k < K; ++k) {
            const double a = A[static_cast<std::int64_t>(k) * M + m];
            const double* b_row = B + static_cast<std::int64_t>(k) * N;
            for (int n = 0; n < N; ++n) c_row[n] += a * b_row[n];
        }
    }
}

void matmul_tn_scalar(double* C, const double* A, const double* B,
                      int M, int K, int N) {
    for (int m = 0; m < M; ++m) {
        double* c_row = C + static_cast<std::int64_t>(m) * N;
        for (int n = 0; n < N; ++n) c_row[n] = 0.0;
    }
    matmul_tn_acc_scalar(C, A, B, M, K, N);
}

void matmul_nt_acc_scalar(double* C, const double* A, const double* B,
                          int M, int K, int N) {
    for (int m = 0; m < M; ++m) {
        const double* a_row = A + static_cast<std::int64_t>(m) * K;
        double* c_row = C + static_cast<std::int64_t>(m) * N;
        for (int n = 0; n < N; ++n) {
            const double* b_row = B + static_cast<std::int64_t>(n) * K;
            double acc = 0.0;
            for (int k = 0; k < K; ++k) acc += a_row[k] * b_row[k];
            c_row[n] += acc;
        }
    }
}

void row_sums_acc_scalar(double* out, const double* A, int M, int N) {
    for (int m = 0; m < M; ++m) {
        const double* row = A + static_cast<std::int64_t>(m) * N;
        double acc = 0.0;
        for (int n = 0; n < N; ++n) acc += row[n];
        out[m] += acc;
    }
}

void add_scalar(double* y, const double* a, const double* b, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) y[i] = a[i] + b[i];
}

void axpy_acc_scalar(double* y, double alpha, const double* x, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_scalar(const double* x, std::int64_t n) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sumsq_dev_scalar(const double* x, double mu, std::int64_t n) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = x[i] - mu;
        acc += d * d;
    }
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::int64_t n) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void adam_update_scalar(double* p, double* m, double* v, const double* g,
                        std::int64_t n, double lr, double beta1, double beta2,
                        double eps, double bc1, double bc2) {
    for (std::int64_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        matmul_acc_scalar,
        matmul_tn_acc_scalar,
        matmul_tn_scalar,
        matmul_nt_acc_scalar,
        row_sums_acc_scalar,
        add_scalar,
        axpy_acc_scalar,
        sum_scalar,
        sumsq_dev_scalar,
        sum_sq_diff_scalar,
        adam_update_scalar,
    };
    return ops;
}

}  // namespace drcn::kernels
