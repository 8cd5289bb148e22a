#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drcn/layers.hpp"

namespace drcn {

/// Declarative description of the denoiser network: a multiscale first layer,
/// num_blocks residual HDC blocks on feature_channels maps, and a bare final
/// convolution back to the image channels.
struct ModelConfig {
    int input_channels = 1;   // 1 = gray, 3 = color
    int feature_channels = 64;
    std::vector<std::pair<int, int>> multiscale = {{3, 12}, {5, 20}, {7, 32}};  // (kernel, filters)
    std::vector<int> block_dilations = {1, 2, 5};
    int num_blocks = 3;
    int block_kernel = 3;
    int final_kernel = 3;

    int depth() const { return 2 + num_blocks * static_cast<int>(block_dilations.size()); }
    void validate() const;  // throws ConfigError naming the violated invariant
    bool operator==(const ModelConfig&) const = default;

    static ModelConfig gray() { return {}; }
    static ModelConfig color() {
        ModelConfig c;
        c.input_channels = 3;
        return c;
    }
};

struct Model {
    ModelConfig config;
    MultiscaleGroup first;
    BatchNormLayer first_bn;
    PReLULayer first_act;
    std::vector<ResidualHDCBlock> blocks;
    ConvLayer last;
    Mode mode = Mode::train;
};

/// Builds the network with Xavier-uniform conv weights (deterministic in the
/// seed), zero biases, BN gamma=1/beta=0, PReLU slopes 0.25.
Model build_model(const ModelConfig& config, std::uint64_t seed);

/// Same-geometry model with every tensor zeroed, used as a gradient buffer.
Model zero_grads_like(const Model& model);

/// Named view of one flat parameter array inside a model.
struct ParamRef {
    std::string name;
    double* data;
    std::int64_t size;
};

/// Learnable parameters in declaration order (conv weights+biases, BN
/// gamma/beta, PReLU slopes). The same order is used by the checkpoint
/// format, the Adam state, and gradient collection.
std::vector<ParamRef> collect_params(Model& model);

/// Learnables plus BN running statistics, in checkpoint order.
std::vector<ParamRef> collect_state(Model& model);

struct ParamCountRow {
    std::string name;
    std::int64_t count;
};

struct ParamCountReport {
    std::int64_t total = 0;
    std::int64_t conv_weights = 0;
    std::int64_t conv_biases = 0;
    std::int64_t bn_params = 0;
    std::int64_t prelu_params = 0;
    std::vector<ParamCountRow> rows;
};

/// Counts every learnable scalar (BN running statistics excluded).
ParamCountReport count_params(const Model& model);

/// (kernel, dilation) stack of the model for receptive-field analysis; the
/// multiscale layer contributes its largest kernel.
std::vector<std::pair<int, int>> model_layer_stack(const ModelConfig& config);

struct ModelCache {
    Tensor4 ms_in;
    BnCache first_bn;
    Tensor4 first_act_in;
    std::vector<BlockCache> blocks;
    Tensor4 last_in;
};

/// Predicts the residual (noise estimate) for a batch; same shape as the
/// input. Train mode updates BN running statistics and can fill a cache for
/// backprop; infer mode is deterministic and leaves the model untouched.
Tensor4 model_forward(Model& model, const Tensor4& batch, ModelCache* cache = nullptr);

/// Accumulates parameter gradients into `grads` (from zero_grads_like) and
/// returns the gradient with respect to the input batch.
Tensor4 model_backward(const Model& model, const ModelCache& cache,
                       const Tensor4& grad_output, Model& grads);

/// Residual-learning denoising: clamp(y - model(y)) into [lo, hi].
/// The model must be in infer mode.
Tensor4 denoise(const Model& model, const Tensor4& noisy,
                double lo = 0.0, double hi = 1.0);

}  // namespace drcn
