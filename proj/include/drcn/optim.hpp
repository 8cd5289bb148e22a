#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drcn/model.hpp"
#include "drcn/tensor.hpp"

namespace drcn {

/// Mean squared error over all elements, with its gradient:
///   loss = (1/N) * sum (pred - target)^2,  grad = 2 (pred - target) / N
std::pair<double, Tensor4> mse_loss(const Tensor4& pred, const Tensor4& target);

/// Adam moments, one (m, v) pair per parameter array, aligned with
/// collect_params order.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t t = 0;
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;

    static AdamState for_params(const std::vector<ParamRef>& params);
};

/// One bias-corrected Adam step over every parameter. Throws NumericError
/// naming the parameter if any gradient is non-finite.
void adam_step(AdamState& state, const std::vector<ParamRef>& params,
               const std::vector<ParamRef>& grads, double lr);

/// Step schedule: `initial` until drop_epoch, a tenth of it from then on
/// (0-based epoch index).
struct LrSchedule {
    double initial = 1e-3;
    int drop_epoch = 60;

    double reduced() const { return initial / 10.0; }
    double at(int epoch) const { return epoch < drop_epoch ? initial : reduced(); }
};

}  // namespace drcn
