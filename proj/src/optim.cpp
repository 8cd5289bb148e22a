#include "drcn/optim.hpp"

#include <cmath>

#include "drcn/kernels.hpp"

namespace drcn {

std::pair<double, Tensor4> mse_loss(const Tensor4& pred, const Tensor4& target) {
    if (!pred.same_shape(target)) {
        throw ShapeError("mse_loss shapes differ: " + pred.shape().str() + " vs " +
                         target.shape().str());
    }
    const std::int64_t n = pred.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double loss = kernels::active().sum_sq_diff(pred.data(), target.data(), n) * inv_n;
    Tensor4 grad = Tensor4::uninit(pred.shape());
    for (std::int64_t i = 0; i < n; ++i) {
        grad[i] = 2.0 * (pred[i] - target[i]) * inv_n;
    }
    return {loss, std::move(grad)};
}

AdamState AdamState::for_params(const std::vector<ParamRef>& params) {
    AdamState state;
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const auto& p : params) {
        state.m.emplace_back(static_cast<std::size_t>(p.size), 0.0);
        state.v.emplace_back(static_cast<std::size_t>(p.size), 0.0);
    }
    return state;
}

void adam_step(AdamState& state, const std::vector<ParamRef>& params,
               const std::vector<ParamRef>& grads, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ShapeError("adam_step: params, grads and state are not aligned");
    }
    if (!(lr > 0.0)) throw ConfigError("adam_step: learning rate must be positive");

    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].size != grads[i].size ||
            params[i].size != static_cast<std::int64_t>(state.m[i].size())) {
            throw ShapeError("adam_step: size mismatch for parameter " + params[i].name);
        }
        const double* g = grads[i].data;
        for (std::int64_t j = 0; j < grads[i].size; ++j) {
            if (!std::isfinite(g[j])) {
                throw NumericError("non-finite gradient in parameter '" + params[i].name +
                                   "' (element " + std::to_string(j) + ")");
            }
        }
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < params.size(); ++i) {
        ops.adam_update(params[i].data, state.m[i].data(), state.v[i].data(),
                        grads[i].data, params[i].size, lr, state.beta1, state.beta2,
                        state.epsilon, bc1, bc2);
    }
}

}  // namespace drcn
