#pragma once

#include <vector>

#include "drcn/tensor.hpp"

namespace drcn {

enum class Mode { train, infer };

// ---------------------------------------------------------------------------
// Dilated convolution (same-padded, stride 1). The forward/backward pass runs
// im2col + GEMM through the dispatched kernels; conv2d_naive is the oracle it
// is tested against.
// ---------------------------------------------------------------------------

struct ConvLayer {
    ConvSpec spec;
    Tensor4 weights;           // (out_c, in_c, K, K)
    std::vector<double> bias;  // out_c

    ConvLayer() = default;
    /// Same-padded layer with zero weights and biases.
    ConvLayer(int in_c, int out_c, int kernel, int dilation = 1);
    void validate() const;
};

Tensor4 conv2d_forward(const ConvLayer& layer, const Tensor4& input);

/// Accumulates dL/dW and dL/db into `grads` (a zeroed ConvLayer of the same
/// geometry) and returns dL/dinput.
Tensor4 conv2d_backward(const ConvLayer& layer, const Tensor4& input,
                        const Tensor4& grad_output, ConvLayer& grads);

// ---------------------------------------------------------------------------
// Batch normalization, per channel over (n, h, w).
// ---------------------------------------------------------------------------

struct BatchNormLayer {
    int channels = 0;
    std::vector<double> gamma, beta;
    std::vector<double> running_mean, running_var;
    double epsilon = 1e-5;
    double momentum = 0.1;  // new_running = (1-momentum)*old + momentum*batch

    BatchNormLayer() = default;
    explicit BatchNormLayer(int channels);
};

struct BnCache {
    Tensor4 x_hat;                 // normalized input, needed for backward
    std::vector<double> inv_std;   // 1 / sqrt(var + eps), per channel
};

/// Train mode normalizes with batch statistics (biased variance) and updates
/// the running statistics; it requires n*h*w >= 2 per channel. Infer mode
/// uses running statistics only and leaves the layer untouched.
Tensor4 batchnorm_forward(BatchNormLayer& layer, const Tensor4& input,
                          Mode mode, BnCache* cache = nullptr);

/// Infer-mode forward on a const layer (no statistics update).
Tensor4 batchnorm_infer(const BatchNormLayer& layer, const Tensor4& input);

/// Full train-mode Jacobian (the batch statistics' dependence on the input is
/// included). Accumulates dgamma/dbeta into `grads`, returns dL/dinput.
Tensor4 batchnorm_backward(const BatchNormLayer& layer, const BnCache& cache,
                           const Tensor4& grad_output, BatchNormLayer& grads);

// ---------------------------------------------------------------------------
// PReLU with one learnable slope per channel.
// ---------------------------------------------------------------------------

struct PReLULayer {
    std::vector<double> slope;

    PReLULayer() = default;
    explicit PReLULayer(int channels, double initial_slope = 0.25);
};

Tensor4 prelu_forward(const PReLULayer& layer, const Tensor4& input);
Tensor4 prelu_backward(const PReLULayer& layer, const Tensor4& input,
                       const Tensor4& grad_output, PReLULayer& grads);

// ---------------------------------------------------------------------------
// Multiscale convolution group: parallel same-padded convolutions with
// different kernel sizes, concatenated along the channel axis.
// ---------------------------------------------------------------------------

struct MultiscaleGroup {
    std::vector<ConvLayer> branches;

    int out_channels() const;
    void validate() const;
};

Tensor4 multiscale_forward(const MultiscaleGroup& group, const Tensor4& input);
Tensor4 multiscale_backward(const MultiscaleGroup& group, const Tensor4& input,
                            const Tensor4& grad_output, MultiscaleGroup& grads);

// ---------------------------------------------------------------------------
// Residual HDC block: (dilated conv -> BN -> PReLU) triples with an identity
// shortcut from the block input to the block output.
// ---------------------------------------------------------------------------

struct ResidualHDCBlock {
    struct Unit {
        ConvLayer conv;
        BatchNormLayer bn;
        PReLULayer act;
    };
    std::vector<Unit> units;

    /// Channel-preserving block with the given dilation sequence; the
    /// sequence must satisfy hdc_validate for the unit kernel size.
    ResidualHDCBlock() = default;
    ResidualHDCBlock(int channels, const std::vector<int>& dilations, int kernel = 3);
};

struct UnitCache {
    Tensor4 conv_in;
    BnCache bn;
    Tensor4 act_in;
};

struct BlockCache {
    std::vector<UnitCache> units;
};

Tensor4 residual_block_forward(ResidualHDCBlock& block, const Tensor4& input,
                               Mode mode, BlockCache* cache = nullptr);
Tensor4 residual_block_infer(const ResidualHDCBlock& block, const Tensor4& input);
Tensor4 residual_block_backward(const ResidualHDCBlock& block, const BlockCache& cache,
                                const Tensor4& grad_output, ResidualHDCBlock& grads);

// Zeroed same-geometry mirrors used as gradient accumulators by the
// *_backward functions above.
ConvLayer zero_grads_like(const ConvLayer& layer);
BatchNormLayer zero_grads_like(const BatchNormLayer& layer);
PReLULayer zero_grads_like(const PReLULayer& layer);
MultiscaleGroup zero_grads_like(const MultiscaleGroup& group);
ResidualHDCBlock zero_grads_like(const ResidualHDCBlock& block);

}  // namespace drcn
