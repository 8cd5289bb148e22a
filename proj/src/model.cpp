#include "drcn/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "drcn/hdc.hpp"
#include "drcn/rng.hpp"

namespace drcn {

void ModelConfig::validate() const {
    if (input_channels != 1 && input_channels != 3) {
        throw ConfigError("input_channels must be 1 (gray) or 3 (color), got " +
                          std::to_string(input_channels));
    }
    if (feature_channels < 1) throw ConfigError("feature_channels must be >= 1");
    if (multiscale.empty()) throw ConfigError("multiscale branch list is empty");
    int filter_sum = 0;
    std::set<int> kernels;
    for (const auto& [kernel, filters] : multiscale) {
        if (kernel < 3 || kernel % 2 == 0) {
            throw ConfigError("multiscale kernel sizes must be odd and >= 3, got " +
                              std::to_string(kernel));
        }
        if (filters < 1) throw ConfigError("multiscale filter counts must be >= 1");
        if (!kernels.insert(kernel).second) {
            throw ConfigError("multiscale kernel sizes must be distinct");
        }
        filter_sum += filters;
    }
    if (filter_sum != feature_channels) {
        throw ConfigError("multiscale filters sum to " + std::to_string(filter_sum) +
                          " but feature_channels is " + std::to_string(feature_channels));
    }
    if (num_blocks < 1) throw ConfigError("num_blocks must be >= 1");
    if (block_kernel < 3 || block_kernel % 2 == 0) {
        throw ConfigError("block_kernel must be odd and >= 3");
    }
    if (final_kernel < 3 || final_kernel % 2 == 0) {
        throw ConfigError("final_kernel must be odd and >= 3");
    }
    if (block_dilations.empty()) throw ConfigError("block_dilations is empty");
    const HdcReport hdc = hdc_validate({block_dilations, block_kernel});
    if (!hdc.valid) {
        throw ConfigError("block_dilations fail the HDC validity check: gap M" +
                          std::to_string(*hdc.failing_index) + " = " +
                          std::to_string(hdc.gaps[*hdc.failing_index - 1]) + " > K = " +
                          std::to_string(block_kernel));
    }
}

namespace {

void xavier_init(ConvLayer& layer, Rng& rng) {
    const ConvSpec& s = layer.spec;
    const double fan_in = static_cast<double>(s.in_channels) * s.kernel * s.kernel;
    const double fan_out = static_cast<double>(s.out_channels) * s.kernel * s.kernel;
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    double* w = layer.weights.data();
    for (std::int64_t i = 0; i < layer.weights.size(); ++i) {
        w[i] = rng.uniform(-bound, bound);
    }
}

}  // namespace

Model build_model(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    Model m;
    m.config = config;
    Rng rng(mix_seed({seed, stream::kWeights}));

    for (const auto& [kernel, filters] : config.multiscale) {
        ConvLayer branch(config.input_channels, filters, kernel, 1);
        xavier_init(branch, rng);
        m.first.branches.push_back(std::move(branch));
    }
    m.first_bn = BatchNormLayer(config.feature_channels);
    m.first_act = PReLULayer(config.feature_channels);

    for (int b = 0; b < config.num_blocks; ++b) {
        ResidualHDCBlock block(config.feature_channels, config.block_dilations,
                               config.block_kernel);
        for (auto& unit : block.units) xavier_init(unit.conv, rng);
        m.blocks.push_back(std::move(block));
    }

    m.last = ConvLayer(config.feature_channels, config.input_channels,
                       config.final_kernel, 1);
    xavier_init(m.last, rng);
    m.mode = Mode::train;
    return m;
}

Model zero_grads_like(const Model& model) {
    Model g;
    g.config = model.config;
    g.first = zero_grads_like(model.first);
    g.first_bn = zero_grads_like(model.first_bn);
    g.first_act = zero_grads_like(model.first_act);
    for (const auto& b : model.blocks) g.blocks.push_back(zero_grads_like(b));
    g.last = zero_grads_like(model.last);
    g.mode = model.mode;
    return g;
}

namespace {

// Single traversal behind collect_params/collect_state so their orders can
// never drift apart.
void visit_model(Model& m, bool with_running_stats,
                 std::vector<ParamRef>& out) {
    auto add_vec = [&out](std::string name, std::vector<double>& v) {
        out.push_back({std::move(name), v.data(), static_cast<std::int64_t>(v.size())});
    };
    auto add_tensor = [&out](std::string name, Tensor4& t) {
        out.push_back({std::move(name), t.data(), t.size()});
    };

    for (std::size_t i = 0; i < m.first.branches.size(); ++i) {
        const std::string p = "multiscale.b" + std::to_string(i);
        add_tensor(p + ".weight", m.first.branches[i].weights);
        add_vec(p + ".bias", m.first.branches[i].bias);
    }
    add_vec("first_bn.gamma", m.first_bn.gamma);
    add_vec("first_bn.beta", m.first_bn.beta);
    add_vec("first_prelu.slope", m.first_act.slope);
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
        for (std::size_t u = 0; u < m.blocks[b].units.size(); ++u) {
            const std::string p = "block" + std::to_string(b) + ".unit" + std::to_string(u);
            auto& unit = m.blocks[b].units[u];
            add_tensor(p + ".conv.weight", unit.conv.weights);
            add_vec(p + ".conv.bias", unit.conv.bias);
            add_vec(p + ".bn.gamma", unit.bn.gamma);
            add_vec(p + ".bn.beta", unit.bn.beta);
            add_vec(p + ".prelu.slope", unit.act.slope);
        }
    }
    add_tensor("final.weight", m.last.weights);
    add_vec("final.bias", m.last.bias);

    if (with_running_stats) {
        add_vec("first_bn.running_mean", m.first_bn.running_mean);
        add_vec("first_bn.running_var", m.first_bn.running_var);
        for (std::size_t b = 0; b < m.blocks.size(); ++b) {
            for (std::size_t u = 0; u < m.blocks[b].units.size(); ++u) {
                const std::string p =
                    "block" + std::to_string(b) + ".unit" + std::to_string(u) + ".bn";
                auto& unit = m.blocks[b].units[u];
                add_vec(p + ".running_mean", unit.bn.running_mean);
                add_vec(p + ".running_var", unit.bn.running_var);
            }
        }
    }
}

}  // namespace

std::vector<ParamRef> collect_params(Model& model) {
    std::vector<ParamRef> out;
    visit_model(model, false, out);
    return out;
}

std::vector<ParamRef> collect_state(Model& model) {
    std::vector<ParamRef> out;
    visit_model(model, true, out);
    return out;
}

ParamCountReport count_params(const Model& model) {
    ParamCountReport report;
    // collect_params does not mutate; it only exposes pointers.
    auto params = collect_params(const_cast<Model&>(model));
    for (const auto& p : params) {
        report.rows.push_back({p.name, p.size});
        report.total += p.size;
        if (p.name.ends_with(".weight")) {
            report.conv_weights += p.size;
        } else if (p.name.ends_with(".bias")) {
            report.conv_biases += p.size;
        } else if (p.name.ends_with(".gamma") || p.name.ends_with(".beta")) {
            report.bn_params += p.size;
        } else if (p.name.ends_with(".slope")) {
            report.prelu_params += p.size;
        }
    }
    return report;
}

std::vector<std::pair<int, int>> model_layer_stack(const ModelConfig& config) {
    config.validate();
    int max_kernel = 0;
    for (const auto& [kernel, filters] : config.multiscale) {
        max_kernel = std::max(max_kernel, kernel);
    }
    std::vector<std::pair<int, int>> stack;
    stack.emplace_back(max_kernel, 1);
    for (int b = 0; b < config.num_blocks; ++b) {
        for (int r : config.block_dilations) stack.emplace_back(config.block_kernel, r);
    }
    stack.emplace_back(config.final_kernel, 1);
    return stack;
}

namespace {

void check_model_input(const Model& model, const Tensor4& batch) {
    if (batch.shape().c != model.config.input_channels) {
        throw ShapeError("model expects " + std::to_string(model.config.input_channels) +
                         " input channels, got " + std::to_string(batch.shape().c));
    }
}

Tensor4 infer_forward(const Model& model, const Tensor4& batch) {
    Tensor4 t = multiscale_forward(model.first, batch);
    t = batchnorm_infer(model.first_bn, t);
    t = prelu_forward(model.first_act, t);
    for (const auto& block : model.blocks) t = residual_block_infer(block, t);
    return conv2d_forward(model.last, t);
}

}  // namespace

Tensor4 model_forward(Model& model, const Tensor4& batch, ModelCache* cache) {
    check_model_input(model, batch);
    if (model.mode == Mode::infer) {
        if (cache) {
            throw ModeError("backprop caches require a train-mode model");
        }
        return infer_forward(model, batch);
    }
    if (cache) cache->ms_in = batch;
    Tensor4 t = multiscale_forward(model.first, batch);
    t = batchnorm_forward(model.first_bn, t, Mode::train, cache ? &cache->first_bn : nullptr);
    if (cache) cache->first_act_in = t;
    t = prelu_forward(model.first_act, t);
    if (cache) cache->blocks.resize(model.blocks.size());
    for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        t = residual_block_forward(model.blocks[b], t, Mode::train,
                                   cache ? &cache->blocks[b] : nullptr);
    }
    if (cache) cache->last_in = t;
    return conv2d_forward(model.last, t);
}

Tensor4 model_backward(const Model& model, const ModelCache& cache,
                       const Tensor4& grad_output, Model& grads) {
    Tensor4 d = conv2d_backward(model.last, cache.last_in, grad_output, grads.last);
    for (std::size_t b = model.blocks.size(); b-- > 0;) {
        d = residual_block_backward(model.blocks[b], cache.blocks[b], d, grads.blocks[b]);
    }
    d = prelu_backward(model.first_act, cache.first_act_in, d, grads.first_act);
    d = batchnorm_backward(model.first_bn, cache.first_bn, d, grads.first_bn);
    return multiscale_backward(model.first, cache.ms_in, d, grads.first);
}

Tensor4 denoise(const Model& model, const Tensor4& noisy, double lo, double hi) {
    if (model.mode != Mode::infer) {
        throw ModeError("denoise requires an infer-mode model (train-mode batch "
                        "statistics would leak into the output)");
    }
    check_model_input(model, noisy);
    Tensor4 residual = infer_forward(model, noisy);
    Tensor4 out = Tensor4::uninit(noisy.shape());
    for (std::int64_t i = 0; i < out.size(); ++i) {
        out[i] = std::clamp(noisy[i] - residual[i], lo, hi);
    }
    return out;
}

}  // namespace drcn
