#include "drcn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "drcn/hdc.hpp"
#include "drcn/kernels.hpp"
#include "drcn/parallel.hpp"

namespace drcn {

namespace {

// Unpacks one (C,h,w) image into the (C*K*K, out_h*out_w) column matrix for
// a dilated convolution with zero padding. Row order is (c, u, v), matching
// both the weight layout and the reference loop in conv2d_naive.
void im2col(const double* im, int C, int h, int w, int K, int r, int p,
            int out_h, int out_w, double* col) {
    const std::int64_t plane = static_cast<std::int64_t>(h) * w;
    double* dst = col;
    for (int c = 0; c < C; ++c) {
        for (int u = 0; u < K; ++u) {
            for (int v = 0; v < K; ++v) {
                const int dy = r * u - p;
                const int dx = r * v - p;
                for (int i = 0; i < out_h; ++i) {
                    double* drow = dst + static_cast<std::int64_t>(i) * out_w;
                    const int y = i + dy;
                    if (y < 0 || y >= h) {
                        std::fill(drow, drow + out_w, 0.0);
                        continue;
                    }
                    const double* srow = im + c * plane + static_cast<std::int64_t>(y) * w;
                    const int j0 = std::max(0, -dx);
                    const int j1 = std::max(j0, std::min(out_w, w - dx));
                    if (j0 > 0) std::fill(drow, drow + j0, 0.0);
                    if (j1 > j0) std::copy(srow + j0 + dx, srow + j1 + dx, drow + j0);
                    if (j1 < out_w) std::fill(drow + j1, drow + out_w, 0.0);
                }
                dst += static_cast<std::int64_t>(out_h) * out_w;
            }
        }
    }
}

// Scatter-add transpose of im2col: accumulates a column-matrix gradient back
// onto the (C,h,w) input gradient.
void col2im_acc(const double* col, int C, int h, int w, int K, int r, int p,
                int out_h, int out_w, double* im_grad) {
    const std::int64_t plane = static_cast<std::int64_t>(h) * w;
    const double* src = col;
    for (int c = 0; c < C; ++c) {
        for (int u = 0; u < K; ++u) {
            for (int v = 0; v < K; ++v) {
                const int dy = r * u - p;
                const int dx = r * v - p;
                for (int i = 0; i < out_h; ++i) {
                    const int y = i + dy;
                    if (y < 0 || y >= h) continue;
                    const double* srow = src + static_cast<std::int64_t>(i) * out_w;
                    double* drow = im_grad + c * plane + static_cast<std::int64_t>(y) * w;
                    const int j0 = std::max(0, -dx);
                    const int j1 = std::max(j0, std::min(out_w, w - dx));
                    for (int j = j0; j < j1; ++j) drow[j + dx] += srow[j];
                }
                src += static_cast<std::int64_t>(out_h) * out_w;
            }
        }
    }
}

void check_conv_input(const ConvLayer& layer, const Tensor4& input) {
    if (input.shape().c != layer.spec.in_channels) {
        throw ShapeError("conv expects " + std::to_string(layer.spec.in_channels) +
                         " input channels, got " + std::to_string(input.shape().c));
    }
}

}  // namespace

// --------------------------------------------------------------------------
// ConvLayer
// --------------------------------------------------------------------------

ConvLayer::ConvLayer(int in_c, int out_c, int kernel, int dilation)
    : spec(ConvSpec::same(in_c, out_c, kernel, dilation)),
      weights(Tensor4::zeros({out_c, in_c, kernel, kernel})),
      bias(static_cast<std::size_t>(out_c), 0.0) {
    spec.validate();
}

void ConvLayer::validate() const {
    spec.validate();
    const Shape4 ws = weights.shape();
    if (ws.n != spec.out_channels || ws.c != spec.in_channels ||
        ws.h != spec.kernel || ws.w != spec.kernel) {
        throw ShapeError("conv weights " + ws.str() + " inconsistent with spec");
    }
    if (static_cast<int>(bias.size()) != spec.out_channels) {
        throw ShapeError("conv bias length inconsistent with spec");
    }
    if (spec.padding != ConvSpec::same_padding(spec.kernel, spec.dilation)) {
        throw ShapeError("conv layers must be same-padded");
    }
}

Tensor4 conv2d_forward(const ConvLayer& layer, const Tensor4& input) {
    check_conv_input(layer, input);
    const ConvSpec& s = layer.spec;
    const Shape4 in = input.shape();
    const int out_h = conv_output_extent(in.h, s);
    const int out_w = conv_output_extent(in.w, s);
    if (out_h < 1 || out_w < 1) {
        throw ShapeError("conv output would be empty for input " + in.str());
    }
    const int k_dim = s.in_channels * s.kernel * s.kernel;
    const std::int64_t pixels = static_cast<std::int64_t>(out_h) * out_w;

    Tensor4 out = Tensor4::uninit({in.n, s.out_channels, out_h, out_w});
    const auto& ops = kernels::active();
    parallel_for(in.n, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> col(static_cast<std::size_t>(k_dim) * pixels);
        for (std::int64_t n = lo; n < hi; ++n) {
            im2col(input.plane(static_cast<int>(n), 0), s.in_channels, in.h, in.w,
                   s.kernel, s.dilation, s.padding, out_h, out_w, col.data());
            double* out_img = out.plane(static_cast<int>(n), 0);
            for (int o = 0; o < s.out_channels; ++o) {
                std::fill(out_img + o * pixels, out_img + (o + 1) * pixels, layer.bias[o]);
            }
            ops.matmul_acc(out_img, layer.weights.data(), col.data(),
                           s.out_channels, k_dim, static_cast<int>(pixels));
        }
    });
    return out;
}

Tensor4 conv2d_backward(const ConvLayer& layer, const Tensor4& input,
                        const Tensor4& grad_output, ConvLayer& grads) {
    check_conv_input(layer, input);
    const ConvSpec& s = layer.spec;
    const Shape4 in = input.shape();
    const Shape4 go = grad_output.shape();
    const int out_h = conv_output_extent(in.h, s);
    const int out_w = conv_output_extent(in.w, s);
    if (go.n != in.n || go.c != s.out_channels || go.h != out_h || go.w != out_w) {
        throw ShapeError("conv grad_output shape " + go.str() +
                         " does not match forward output");
    }
    if (!grads.weights.same_shape(layer.weights) ||
        grads.bias.size() != layer.bias.size()) {
        throw ShapeError("conv gradient accumulator does not match the layer");
    }
    const int k_dim = s.in_channels * s.kernel * s.kernel;
    const std::int64_t pixels = static_cast<std::int64_t>(out_h) * out_w;
    const std::int64_t w_count = layer.weights.size();

    Tensor4 grad_input = Tensor4::zeros(in);
    // Per-image weight/bias partials, reduced serially in image order below
    // so the result is independent of the parallel partition.
    std::vector<double> dw_all(static_cast<std::size_t>(in.n) * w_count, 0.0);
    std::vector<double> db_all(static_cast<std::size_t>(in.n) * s.out_channels, 0.0);

    const auto& ops = kernels::active();
    parallel_for(in.n, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> col(static_cast<std::size_t>(k_dim) * pixels);
        std::vector<double> dcol(static_cast<std::size_t>(k_dim) * pixels);
        for (std::int64_t n = lo; n < hi; ++n) {
            const double* go_img = grad_output.plane(static_cast<int>(n), 0);

            // dinput = col2im(W^T * dY)
            ops.matmul_tn(dcol.data(), layer.weights.data(), go_img,
                          k_dim, s.out_channels, static_cast<int>(pixels));
            col2im_acc(dcol.data(), s.in_channels, in.h, in.w, s.kernel, s.dilation,
                       s.padding, out_h, out_w, grad_input.plane(static_cast<int>(n), 0));

            // dW = dY * col^T, db = row sums of dY
            im2col(input.plane(static_cast<int>(n), 0), s.in_channels, in.h, in.w,
                   s.kernel, s.dilation, s.padding, out_h, out_w, col.data());
            ops.matmul_nt_acc(dw_all.data() + n * w_count, go_img, col.data(),
                              s.out_channels, static_cast<int>(pixels), k_dim);
            ops.row_sums_acc(db_all.data() + n * s.out_channels, go_img,
                             s.out_channels, static_cast<int>(pixels));
        }
    });

    for (int n = 0; n < in.n; ++n) {
        ops.axpy_acc(grads.weights.data(), 1.0, dw_all.data() + n * w_count, w_count);
        for (int o = 0; o < s.out_channels; ++o) {
            grads.bias[o] += db_all[static_cast<std::size_t>(n) * s.out_channels + o];
        }
    }
    return grad_input;
}

// --------------------------------------------------------------------------
// BatchNormLayer
// --------------------------------------------------------------------------

BatchNormLayer::BatchNormLayer(int channels)
    : channels(channels),
      gamma(static_cast<std::size_t>(channels), 1.0),
      beta(static_cast<std::size_t>(channels), 0.0),
      running_mean(static_cast<std::size_t>(channels), 0.0),
      running_var(static_cast<std::size_t>(channels), 1.0) {}

namespace {
void check_bn_input(const BatchNormLayer& layer, const Tensor4& input) {
    if (input.shape().c != layer.channels) {
        throw ShapeError("batchnorm expects " + std::to_string(layer.channels) +
                         " channels, got " + std::to_string(input.shape().c));
    }
}
}  // namespace

Tensor4 batchnorm_forward(BatchNormLayer& layer, const Tensor4& input,
                          Mode mode, BnCache* cache) {
    if (mode == Mode::infer) return batchnorm_infer(layer, input);
    check_bn_input(layer, input);
    const Shape4 in = input.shape();
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    const std::int64_t count = static_cast<std::int64_t>(in.n) * plane;
    if (count < 2) {
        throw ShapeError("degenerate batch: batchnorm train mode needs at least 2 "
                         "values per channel, got " + std::to_string(count));
    }

    Tensor4 out = Tensor4::uninit(in);
    Tensor4 x_hat = Tensor4::uninit(in);
    std::vector<double> inv_std(static_cast<std::size_t>(in.c));
    const auto& ops = kernels::active();

    // Channels are independent; within one channel the reduction order over
    // (n, plane) is fixed, so the partitioning cannot change results.
    parallel_for(in.c, [&](std::int64_t lo, std::int64_t hi) {
        for (int c = static_cast<int>(lo); c < hi; ++c) {
            double total = 0.0;
            for (int n = 0; n < in.n; ++n) total += ops.sum(input.plane(n, c), plane);
            const double mean = total / static_cast<double>(count);

            double sq = 0.0;
            for (int n = 0; n < in.n; ++n) {
                sq += ops.sumsq_dev(input.plane(n, c), mean, plane);
            }
            const double var = sq / static_cast<double>(count);  // biased

            const double is = 1.0 / std::sqrt(var + layer.epsilon);
            inv_std[static_cast<std::size_t>(c)] = is;
            const double g = layer.gamma[static_cast<std::size_t>(c)];
            const double b = layer.beta[static_cast<std::size_t>(c)];
            for (int n = 0; n < in.n; ++n) {
                const double* x = input.plane(n, c);
                double* xh = x_hat.plane(n, c);
                double* y = out.plane(n, c);
                for (std::int64_t i = 0; i < plane; ++i) {
                    xh[i] = (x[i] - mean) * is;
                    y[i] = g * xh[i] + b;
                }
            }
            layer.running_mean[static_cast<std::size_t>(c)] =
                (1.0 - layer.momentum) * layer.running_mean[static_cast<std::size_t>(c)] +
                layer.momentum * mean;
            layer.running_var[static_cast<std::size_t>(c)] =
                (1.0 - layer.momentum) * layer.running_var[static_cast<std::size_t>(c)] +
                layer.momentum * var;
        }
    });
    if (cache) {
        cache->x_hat = std::move(x_hat);
        cache->inv_std = std::move(inv_std);
    }
    return out;
}

Tensor4 batchnorm_infer(const BatchNormLayer& layer, const Tensor4& input) {
    check_bn_input(layer, input);
    const Shape4 in = input.shape();
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    Tensor4 out = Tensor4::uninit(in);
    for (int c = 0; c < in.c; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        const double is = 1.0 / std::sqrt(layer.running_var[ci] + layer.epsilon);
        const double g = layer.gamma[ci];
        const double b = layer.beta[ci];
        const double mean = layer.running_mean[ci];
        for (int n = 0; n < in.n; ++n) {
            const double* x = input.plane(n, c);
            double* y = out.plane(n, c);
            for (std::int64_t i = 0; i < plane; ++i) y[i] = g * (x[i] - mean) * is + b;
        }
    }
    return out;
}

Tensor4 batchnorm_backward(const BatchNormLayer& layer, const BnCache& cache,
                           const Tensor4& grad_output, BatchNormLayer& grads) {
    check_bn_input(layer, grad_output);
    const Shape4 in = grad_output.shape();
    if (!cache.x_hat.same_shape(grad_output)) {
        throw ShapeError("batchnorm cache does not match grad_output shape");
    }
    if (grads.gamma.size() != layer.gamma.size() ||
        grads.beta.size() != layer.beta.size()) {
        throw ShapeError("batchnorm gradient accumulator does not match the layer");
    }
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    const double m = static_cast<double>(static_cast<std::int64_t>(in.n) * plane);

    Tensor4 grad_input = Tensor4::uninit(in);
    parallel_for(in.c, [&](std::int64_t lo, std::int64_t hi) {
        for (int c = static_cast<int>(lo); c < hi; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int n = 0; n < in.n; ++n) {
                const double* dy = grad_output.plane(n, c);
                const double* xh = cache.x_hat.plane(n, c);
                for (std::int64_t i = 0; i < plane; ++i) {
                    sum_dy += dy[i];
                    sum_dy_xhat += dy[i] * xh[i];
                }
            }
            grads.gamma[ci] += sum_dy_xhat;
            grads.beta[ci] += sum_dy;

            // Train-mode Jacobian, batch statistics included:
            //   dx = gamma*inv_std/m * (m*dy - sum(dy) - x_hat*sum(dy*x_hat))
            const double scale = layer.gamma[ci] * cache.inv_std[ci] / m;
            for (int n = 0; n < in.n; ++n) {
                const double* dy = grad_output.plane(n, c);
                const double* xh = cache.x_hat.plane(n, c);
                double* dx = grad_input.plane(n, c);
                for (std::int64_t i = 0; i < plane; ++i) {
                    dx[i] = scale * (m * dy[i] - sum_dy - xh[i] * sum_dy_xhat);
                }
            }
        }
    });
    return grad_input;
}

// --------------------------------------------------------------------------
// PReLULayer
// --------------------------------------------------------------------------

PReLULayer::PReLULayer(int channels, double initial_slope)
    : slope(static_cast<std::size_t>(channels), initial_slope) {}

namespace {
void check_prelu_input(const PReLULayer& layer, const Tensor4& input) {
    if (input.shape().c != static_cast<int>(layer.slope.size())) {
        throw ShapeError("prelu expects " + std::to_string(layer.slope.size()) +
                         " channels, got " + std::to_string(input.shape().c));
    }
}
}  // namespace

Tensor4 prelu_forward(const PReLULayer& layer, const Tensor4& input) {
    check_prelu_input(layer, input);
    const Shape4 in = input.shape();
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    Tensor4 out = Tensor4::uninit(in);
    parallel_for(in.c, [&](std::int64_t lo, std::int64_t hi) {
        for (int c = static_cast<int>(lo); c < hi; ++c) {
            const double a = layer.slope[static_cast<std::size_t>(c)];
            for (int n = 0; n < in.n; ++n) {
                const double* x = input.plane(n, c);
                double* y = out.plane(n, c);
                for (std::int64_t i = 0; i < plane; ++i) {
                    y[i] = x[i] >= 0.0 ? x[i] : a * x[i];
                }
            }
        }
    });
    return out;
}

Tensor4 prelu_backward(const PReLULayer& layer, const Tensor4& input,
                       const Tensor4& grad_output, PReLULayer& grads) {
    check_prelu_input(layer, input);
    if (!input.same_shape(grad_output)) {
        throw ShapeError("prelu grad_output shape does not match input");
    }
    if (grads.slope.size() != layer.slope.size()) {
        throw ShapeError("prelu gradient accumulator does not match the layer");
    }
    const Shape4 in = input.shape();
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    Tensor4 grad_input = Tensor4::uninit(in);
    // Parallel over channels: each slope gradient is owned by one worker and
    // accumulated in (n, plane) order.
    parallel_for(in.c, [&](std::int64_t lo, std::int64_t hi) {
        for (int c = static_cast<int>(lo); c < hi; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            const double a = layer.slope[ci];
            double da = 0.0;
            for (int n = 0; n < in.n; ++n) {
                const double* x = input.plane(n, c);
                const double* dy = grad_output.plane(n, c);
                double* dx = grad_input.plane(n, c);
                for (std::int64_t i = 0; i < plane; ++i) {
                    if (x[i] >= 0.0) {
                        dx[i] = dy[i];
                    } else {
                        dx[i] = a * dy[i];
                        da += dy[i] * x[i];
                    }
                }
            }
            grads.slope[ci] += da;
        }
    });
    return grad_input;
}

// --------------------------------------------------------------------------
// MultiscaleGroup
// --------------------------------------------------------------------------

int MultiscaleGroup::out_channels() const {
    int total = 0;
    for (const auto& b : branches) total += b.spec.out_channels;
    return total;
}

void MultiscaleGroup::validate() const {
    if (branches.empty()) throw ConfigError("multiscale group needs at least one branch");
    for (const auto& b : branches) {
        b.validate();
        if (b.spec.in_channels != branches.front().spec.in_channels) {
            throw ShapeError("multiscale branches disagree on input channels");
        }
    }
}

Tensor4 multiscale_forward(const MultiscaleGroup& group, const Tensor4& input) {
    group.validate();
    const Shape4 in = input.shape();
    Tensor4 out = Tensor4::uninit({in.n, group.out_channels(), in.h, in.w});
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    int offset = 0;
    for (const auto& branch : group.branches) {
        Tensor4 b = conv2d_forward(branch, input);
        if (b.shape().h != in.h || b.shape().w != in.w) {
            throw ShapeError("multiscale branch changed spatial size");
        }
        for (int n = 0; n < in.n; ++n) {
            for (int o = 0; o < branch.spec.out_channels; ++o) {
                std::memcpy(out.plane(n, offset + o), b.plane(n, o),
                            sizeof(double) * static_cast<std::size_t>(plane));
            }
        }
        offset += branch.spec.out_channels;
    }
    return out;
}

Tensor4 multiscale_backward(const MultiscaleGroup& group, const Tensor4& input,
                            const Tensor4& grad_output, MultiscaleGroup& grads) {
    group.validate();
    const Shape4 in = input.shape();
    if (grad_output.shape().c != group.out_channels()) {
        throw ShapeError("multiscale grad_output channel count mismatch");
    }
    if (grads.branches.size() != group.branches.size()) {
        throw ShapeError("multiscale gradient accumulator does not match the group");
    }
    const std::int64_t plane = static_cast<std::int64_t>(in.h) * in.w;
    Tensor4 grad_input = Tensor4::zeros(in);
    const auto& ops = kernels::active();
    int offset = 0;
    for (std::size_t bi = 0; bi < group.branches.size(); ++bi) {
        const auto& branch = group.branches[bi];
        Tensor4 slice = Tensor4::uninit({in.n, branch.spec.out_channels, in.h, in.w});
        for (int n = 0; n < in.n; ++n) {
            for (int o = 0; o < branch.spec.out_channels; ++o) {
                std::memcpy(slice.plane(n, o), grad_output.plane(n, offset + o),
                            sizeof(double) * static_cast<std::size_t>(plane));
            }
        }
        Tensor4 dx = conv2d_backward(branch, input, slice, grads.branches[bi]);
        ops.add(grad_input.data(), grad_input.data(), dx.data(), grad_input.size());
        offset += branch.spec.out_channels;
    }
    return grad_input;
}

// --------------------------------------------------------------------------
// ResidualHDCBlock
// --------------------------------------------------------------------------

ResidualHDCBlock::ResidualHDCBlock(int channels, const std::vector<int>& dilations,
                                   int kernel) {
    const HdcReport report = hdc_validate({dilations, kernel});
    if (!report.valid) {
        throw ConfigError("residual block dilation sequence fails the HDC check (gap M" +
                          std::to_string(*report.failing_index) + " = " +
                          std::to_string(report.gaps[*report.failing_index - 1]) +
                          " > K = " + std::to_string(kernel) + ")");
    }
    for (int r : dilations) {
        Unit unit;
        unit.conv = ConvLayer(channels, channels, kernel, r);
        unit.bn = BatchNormLayer(channels);
        unit.act = PReLULayer(channels);
        units.push_back(std::move(unit));
    }
}

namespace {
void check_block_input(const ResidualHDCBlock& block, const Tensor4& input) {
    if (block.units.empty()) throw ConfigError("residual block has no units");
    if (input.shape().c != block.units.front().conv.spec.in_channels) {
        throw ShapeError("residual block channel mismatch: expected " +
                         std::to_string(block.units.front().conv.spec.in_channels) +
                         ", got " + std::to_string(input.shape().c));
    }
}
}  // namespace

Tensor4 residual_block_forward(ResidualHDCBlock& block, const Tensor4& input,
                               Mode mode, BlockCache* cache) {
    check_block_input(block, input);
    if (cache) cache->units.resize(block.units.size());
    Tensor4 t = input;
    for (std::size_t u = 0; u < block.units.size(); ++u) {
        auto& unit = block.units[u];
        UnitCache* uc = cache ? &cache->units[u] : nullptr;
        if (uc) uc->conv_in = t;
        t = conv2d_forward(unit.conv, t);
        t = batchnorm_forward(unit.bn, t, mode, uc ? &uc->bn : nullptr);
        if (uc) uc->act_in = t;
        t = prelu_forward(unit.act, t);
    }
    kernels::active().add(t.data(), t.data(), input.data(), t.size());
    return t;
}

Tensor4 residual_block_infer(const ResidualHDCBlock& block, const Tensor4& input) {
    check_block_input(block, input);
    Tensor4 t = input;
    for (const auto& unit : block.units) {
        t = conv2d_forward(unit.conv, t);
        t = batchnorm_infer(unit.bn, t);
        t = prelu_forward(unit.act, t);
    }
    kernels::active().add(t.data(), t.data(), input.data(), t.size());
    return t;
}

Tensor4 residual_block_backward(const ResidualHDCBlock& block, const BlockCache& cache,
                                const Tensor4& grad_output, ResidualHDCBlock& grads) {
    if (cache.units.size() != block.units.size() ||
        grads.units.size() != block.units.size()) {
        throw ShapeError("residual block cache/gradients do not match the block");
    }
    Tensor4 d = grad_output;
    for (std::size_t i = block.units.size(); i-- > 0;) {
        const auto& unit = block.units[i];
        const auto& uc = cache.units[i];
        auto& gu = grads.units[i];
        d = prelu_backward(unit.act, uc.act_in, d, gu.act);
        d = batchnorm_backward(unit.bn, uc.bn, d, gu.bn);
        d = conv2d_backward(unit.conv, uc.conv_in, d, gu.conv);
    }
    // Shortcut: block input feeds the output directly.
    kernels::active().add(d.data(), d.data(), grad_output.data(), d.size());
    return d;
}

// --------------------------------------------------------------------------
// Zeroed gradient mirrors
// --------------------------------------------------------------------------

ConvLayer zero_grads_like(const ConvLayer& layer) {
    ConvLayer g;
    g.spec = layer.spec;
    g.weights = Tensor4::zeros(layer.weights.shape());
    g.bias.assign(layer.bias.size(), 0.0);
    return g;
}

BatchNormLayer zero_grads_like(const BatchNormLayer& layer) {
    BatchNormLayer g;
    g.channels = layer.channels;
    g.gamma.assign(layer.gamma.size(), 0.0);
    g.beta.assign(layer.beta.size(), 0.0);
    g.running_mean.assign(layer.running_mean.size(), 0.0);
    g.running_var.assign(layer.running_var.size(), 0.0);
    g.epsilon = layer.epsilon;
    g.momentum = layer.momentum;
    return g;
}

PReLULayer zero_grads_like(const PReLULayer& layer) {
    PReLULayer g;
    g.slope.assign(layer.slope.size(), 0.0);
    return g;
}

MultiscaleGroup zero_grads_like(const MultiscaleGroup& group) {
    MultiscaleGroup g;
    for (const auto& b : group.branches) g.branches.push_back(zero_grads_like(b));
    return g;
}

ResidualHDCBlock zero_grads_like(const ResidualHDCBlock& block) {
    ResidualHDCBlock g;
    for (const auto& u : block.units) {
        ResidualHDCBlock::Unit gu;
        gu.conv = zero_grads_like(u.conv);
        gu.bn = zero_grads_like(u.bn);
        gu.act = zero_grads_like(u.act);
        g.units.push_back(std::move(gu));
    }
    return g;
}

}  // namespace drcn
