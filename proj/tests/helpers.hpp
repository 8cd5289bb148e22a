#pragma once

// Shared test utilities: random tensors and the central finite-difference
// gradient oracle. The oracle is test-only and independent of the backward
// passes it checks.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "drcn/rng.hpp"
#include "drcn/tensor.hpp"

namespace drcn::testing {

inline Tensor4 random_tensor(Shape4 shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor4 t = Tensor4::zeros(shape);
    for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double lo = -1.0,
                                         double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// max(|a-n|) scaled: relative where the magnitudes allow, absolute near zero.
inline double rel_err(double analytic, double numeric) {
    const double denom = std::max(std::abs(analytic), std::abs(numeric));
    if (denom < 1e-6) return std::abs(analytic - numeric);  // both ~0: absolute
    return std::abs(analytic - numeric) / denom;
}

/// Central finite differences of a scalar-valued function of one flat array:
/// perturbs every element in place by +-step and compares to `analytic`.
/// Returns the max rel_err over all elements.
inline double fd_check(double* values, std::int64_t count, const double* analytic,
                       const std::function<double()>& loss_fn, double step = 1e-5) {
    double worst = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const double saved = values[i];
        values[i] = saved + step;
        const double up = loss_fn();
        values[i] = saved - step;
        const double down = loss_fn();
        values[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        worst = std::max(worst, rel_err(analytic[i], numeric));
    }
    return worst;
}

}  // namespace drcn::testing
