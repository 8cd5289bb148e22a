// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line per criterion. Exit code = number of failed criteria.
//
//   1. HDC worked examples (exact)
//   2. Parameter counts (exact conv-weight subtotals, totals within 5%)
//   3. Gradient correctness (finite differences, every layer kind + model)
//   4. Oracle equivalence (optimized conv vs conv2d_naive, 200 configs)
//   5. Desk-scale denoising (reduced config, synthetic corpus, sigma 25)
//   6. Overfit sanity (single patch, miniature model, 5000 Adam steps)
//   7. Determinism & persistence (seeds, roundtrip, resume)
//   8. Metric correctness (PSNR values)
//   9. Receptive field values

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "drcn/checkpoint.hpp"
#include "drcn/hdc.hpp"
#include "drcn/kernels.hpp"
#include "drcn/metrics.hpp"
#include "drcn/rng.hpp"
#include "drcn/trainer.hpp"

using namespace drcn;
namespace fs = std::filesystem;

namespace {

// --- tiny check harness -----------------------------------------------------

int g_checks_failed = 0;

bool expect(bool ok, const std::string& what) {
    if (!ok) {
        std::printf("       FAILED: %s\n", what.c_str());
        ++g_checks_failed;
    }
    return ok;
}

fs::path workspace() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "drcn_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

// --- finite-difference oracle (same recipe as the unit suite) ---------------

double rel_err(double analytic, double numeric) {
    const double denom = std::max(std::abs(analytic), std::abs(numeric));
    if (denom < 1e-6) return std::abs(analytic - numeric);
    return std::abs(analytic - numeric) / denom;
}

double fd_check(double* values, std::int64_t count, const double* analytic,
                const std::function<double()>& loss_fn, double step = 1e-5) {
    double worst = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const double saved = values[i];
        values[i] = saved + step;
        const double up = loss_fn();
        values[i] = saved - step;
        const double down = loss_fn();
        values[i] = saved;
        worst = std::max(worst, rel_err(analytic[i], (up - down) / (2.0 * step)));
    }
    return worst;
}

Tensor4 random_tensor(Shape4 shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor4 t = Tensor4::uninit(shape);
    for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
}

double weighted_sum(const Tensor4& out, const Tensor4& r) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < out.size(); ++i) acc += out[i] * r[i];
    return acc;
}

ModelConfig miniature_config() {
    ModelConfig c;
    c.feature_channels = 8;
    c.multiscale = {{3, 2}, {5, 2}, {7, 4}};
    c.num_blocks = 2;
    return c;
}

ModelConfig reduced_config() {
    ModelConfig c;
    c.feature_channels = 16;
    c.multiscale = {{3, 4}, {5, 4}, {7, 8}};
    c.num_blocks = 2;
    return c;
}

// --- criteria ----------------------------------------------------------------

bool criterion_hdc() {
    const auto good = hdc_validate({{1, 2, 5}, 3});
    const auto bad = hdc_validate({{1, 2, 9}, 3});
    std::printf("       [1,2,5] K=3: M2=%d valid=%d; [1,2,9] K=3: M2=%d valid=%d\n",
                good.gaps[1], good.valid ? 1 : 0, bad.gaps[1], bad.valid ? 1 : 0);
    bool ok = expect(good.gaps[1] == 2 && good.valid, "[1,2,5] must validate with M2=2");
    ok &= expect(bad.gaps[1] == 5 && !bad.valid, "[1,2,9] must fail with M2=5");
    return ok;
}

bool criterion_param_counts() {
    Model gray = build_model(ModelConfig::gray(), 1);
    Model color = build_model(ModelConfig::color(), 1);
    const auto g = count_params(gray);
    const auto c = count_params(color);
    std::printf("       gray: conv weights %lld, total %lld; color: conv weights %lld, "
                "total %lld\n",
                static_cast<long long>(g.conv_weights), static_cast<long long>(g.total),
                static_cast<long long>(c.conv_weights), static_cast<long long>(c.total));
    bool ok = expect(g.conv_weights == 334528, "gray conv-weight subtotal == 334528");
    ok &= expect(c.conv_weights == 340032, "color conv-weight subtotal == 340032");
    ok &= expect(std::abs(static_cast<double>(g.total) - 3.3e5) / 3.3e5 < 0.05,
                 "gray total within 5% of 3.3e5");
    ok &= expect(std::abs(static_cast<double>(c.total) - 3.4e5) / 3.4e5 < 0.05,
                 "color total within 5% of 3.4e5");
    return ok;
}

bool criterion_gradients() {
    constexpr double kTol = 1e-4;
    bool ok = true;
    double worst_overall = 0.0;
    auto track = [&](const char* name, double worst) {
        worst_overall = std::max(worst_overall, worst);
        ok &= expect(worst < kTol, std::string(name) + " gradient check");
    };

    {  // dilated conv
        Rng rng(101);
        ConvLayer layer(4, 3, 3, 2);
        for (std::int64_t i = 0; i < layer.weights.size(); ++i) {
            layer.weights[i] = rng.uniform(-0.5, 0.5);
        }
        for (double& b : layer.bias) b = rng.uniform(-0.2, 0.2);
        Tensor4 input = random_tensor({2, 4, 6, 6}, rng);
        const Tensor4 proj = random_tensor({2, 3, 6, 6}, rng);
        ConvLayer grads = zero_grads_like(layer);
        const Tensor4 gi = conv2d_backward(layer, input, proj, grads);
        auto loss = [&] { return weighted_sum(conv2d_forward(layer, input), proj); };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        worst = std::max(worst, fd_check(layer.weights.data(), layer.weights.size(),
                                         grads.weights.data(), loss));
        worst = std::max(worst, fd_check(layer.bias.data(), 3, grads.bias.data(), loss));
        track("conv", worst);
    }
    {  // batch normalization
        Rng rng(107);
        BatchNormLayer layer(4);
        for (double& g : layer.gamma) g = rng.uniform(0.5, 1.5);
        for (double& b : layer.beta) b = rng.uniform(-0.5, 0.5);
        Tensor4 input = random_tensor({2, 4, 6, 6}, rng);
        const Tensor4 proj = random_tensor({2, 4, 6, 6}, rng);
        BnCache cache;
        batchnorm_forward(layer, input, Mode::train, &cache);
        BatchNormLayer grads = zero_grads_like(layer);
        const Tensor4 gi = batchnorm_backward(layer, cache, proj, grads);
        auto loss = [&] {
            return weighted_sum(batchnorm_forward(layer, input, Mode::train), proj);
        };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        worst = std::max(worst, fd_check(layer.gamma.data(), 4, grads.gamma.data(), loss));
        worst = std::max(worst, fd_check(layer.beta.data(), 4, grads.beta.data(), loss));
        track("batchnorm", worst);
    }
    {  // prelu (inputs bounded away from the kink)
        Rng rng(109);
        PReLULayer layer(3, 0.25);
        Tensor4 input = Tensor4::uninit({2, 3, 6, 6});
        for (std::int64_t i = 0; i < input.size(); ++i) {
            const double mag = rng.uniform(0.1, 1.0);
            input[i] = rng.uniform() < 0.5 ? -mag : mag;
        }
        const Tensor4 proj = random_tensor({2, 3, 6, 6}, rng);
        PReLULayer grads = zero_grads_like(layer);
        const Tensor4 gi = prelu_backward(layer, input, proj, grads);
        auto loss = [&] { return weighted_sum(prelu_forward(layer, input), proj); };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        worst = std::max(worst, fd_check(layer.slope.data(), 3, grads.slope.data(), loss));
        track("prelu", worst);
    }
    {  // multiscale group
        Rng rng(113);
        MultiscaleGroup group;
        group.branches.emplace_back(2, 2, 3, 1);
        group.branches.emplace_back(2, 2, 5, 1);
        group.branches.emplace_back(2, 4, 7, 1);
        for (auto& b : group.branches) {
            for (std::int64_t i = 0; i < b.weights.size(); ++i) {
                b.weights[i] = rng.uniform(-0.3, 0.3);
            }
            for (double& bias : b.bias) bias = rng.uniform(-0.2, 0.2);
        }
        Tensor4 input = random_tensor({2, 2, 8, 8}, rng);
        const Tensor4 proj = random_tensor({2, 8, 8, 8}, rng);
        MultiscaleGroup grads = zero_grads_like(group);
        const Tensor4 gi = multiscale_backward(group, input, proj, grads);
        auto loss = [&] { return weighted_sum(multiscale_forward(group, input), proj); };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        for (std::size_t b = 0; b < group.branches.size(); ++b) {
            worst = std::max(worst,
                             fd_check(group.branches[b].weights.data(),
                                      group.branches[b].weights.size(),
                                      grads.branches[b].weights.data(), loss));
        }
        track("multiscale", worst);
    }
    {  // residual HDC block (seed keeps PReLU inputs off the kink)
        Rng rng(128);
        ResidualHDCBlock block(4, {1, 2, 5});
        for (auto& unit : block.units) {
            for (std::int64_t i = 0; i < unit.conv.weights.size(); ++i) {
                unit.conv.weights[i] = rng.uniform(-0.3, 0.3);
            }
            for (double& b : unit.conv.bias) b = rng.uniform(-0.1, 0.1);
            for (double& g : unit.bn.gamma) g = rng.uniform(0.5, 1.5);
            for (double& b : unit.bn.beta) b = rng.uniform(-0.3, 0.3);
            for (double& s : unit.act.slope) s = rng.uniform(0.1, 0.5);
        }
        Tensor4 input = random_tensor({2, 4, 6, 6}, rng);
        const Tensor4 proj = random_tensor({2, 4, 6, 6}, rng);
        BlockCache cache;
        residual_block_forward(block, input, Mode::train, &cache);
        ResidualHDCBlock grads = zero_grads_like(block);
        const Tensor4 gi = residual_block_backward(block, cache, proj, grads);
        auto loss = [&] {
            return weighted_sum(residual_block_forward(block, input, Mode::train), proj);
        };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        for (std::size_t u = 0; u < block.units.size(); ++u) {
            worst = std::max(worst, fd_check(block.units[u].conv.weights.data(),
                                             block.units[u].conv.weights.size(),
                                             grads.units[u].conv.weights.data(), loss));
            worst = std::max(worst, fd_check(block.units[u].bn.gamma.data(), 4,
                                             grads.units[u].bn.gamma.data(), loss));
            worst = std::max(worst, fd_check(block.units[u].act.slope.data(), 4,
                                             grads.units[u].act.slope.data(), loss));
        }
        track("residual-block", worst);
    }
    {  // end-to-end miniature model
        Model model;
        Tensor4 input, proj;
        ModelCache cache;
        bool found = false;
        for (std::uint64_t seed = 1; seed <= 64 && !found; ++seed) {
            model = build_model(miniature_config(), seed);
            model.mode = Mode::train;
            Rng rng(seed * 7919 + 1);
            input = random_tensor({2, 1, 8, 8}, rng);
            proj = random_tensor({2, 1, 8, 8}, rng);
            cache = ModelCache{};
            model_forward(model, input, &cache);
            double min_act = 1e30;
            for (std::int64_t i = 0; i < cache.first_act_in.size(); ++i) {
                min_act = std::min(min_act, std::abs(cache.first_act_in[i]));
            }
            for (const auto& bc : cache.blocks) {
                for (const auto& uc : bc.units) {
                    for (std::int64_t i = 0; i < uc.act_in.size(); ++i) {
                        min_act = std::min(min_act, std::abs(uc.act_in[i]));
                    }
                }
            }
            found = min_act > 5e-4;
        }
        if (!expect(found, "seed with PReLU inputs clear of the kink")) return false;

        Model grads = zero_grads_like(model);
        const Tensor4 gi = model_backward(model, cache, proj, grads);
        auto loss = [&] { return weighted_sum(model_forward(model, input), proj); };
        double worst = fd_check(input.data(), input.size(), gi.data(), loss);
        auto params = collect_params(model);
        auto grefs = collect_params(grads);
        for (std::size_t i = 0; i < params.size(); ++i) {
            worst = std::max(worst,
                             fd_check(params[i].data, params[i].size, grefs[i].data, loss));
        }
        track("end-to-end", worst);
    }
    std::printf("       max relative error across all checks: %.3g (tolerance 1e-4)\n",
                worst_overall);
    return ok;
}

bool criterion_conv_oracle() {
    Rng rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int in_c = 1 + static_cast<int>(rng.uniform_index(4));
        const int out_c = 1 + static_cast<int>(rng.uniform_index(5));
        const int k = 3 + 2 * static_cast<int>(rng.uniform_index(3));
        const int r = 1 + static_cast<int>(rng.uniform_index(5));
        const int n = 1 + static_cast<int>(rng.uniform_index(3));
        const int h = k + static_cast<int>(rng.uniform_index(14));
        const int w = k + static_cast<int>(rng.uniform_index(14));

        ConvLayer layer(in_c, out_c, k, r);
        for (std::int64_t i = 0; i < layer.weights.size(); ++i) {
            layer.weights[i] = rng.uniform(-1.0, 1.0);
        }
        for (double& b : layer.bias) b = rng.uniform(-1.0, 1.0);
        const Tensor4 input = random_tensor({n, in_c, h, w}, rng);

        const Tensor4 fast = conv2d_forward(layer, input);
        const Tensor4 slow = conv2d_naive(input, layer.weights, layer.bias, layer.spec);
        for (std::int64_t i = 0; i < fast.size(); ++i) {
            worst = std::max(worst, std::abs(fast[i] - slow[i]));
        }
    }
    std::printf("       backend %s, 200 configurations, max |diff| = %.3g\n",
                kernels::active().name, worst);
    return expect(worst < 1e-12, "optimized conv == conv2d_naive within 1e-12");
}

bool criterion_desk_scale() {
    const fs::path corpus = workspace() / "corpus";
    const fs::path holdout = workspace() / "holdout";
    const fs::path out = workspace() / "run";
    write_synthetic_corpus(corpus.string(), 12, 180, 1, 2025);
    write_synthetic_corpus(holdout.string(), 3, 180, 1, 909090);

    TrainConfig cfg;
    cfg.model = reduced_config();
    cfg.sigma = 25.0;
    cfg.batch_size = 64;
    cfg.patch_size = 45;
    cfg.patch_stride = 35;
    cfg.augment = true;
    cfg.val_fraction = 0.0;
    cfg.validate_every = 0;
    cfg.seed = 7;
    cfg.corpus_dir = corpus.string();
    cfg.out_dir = out.string();
    // 12 images of 180x180 at stride 35 give 300 patches = 5 batches/epoch;
    // 600 epochs = 3000 Adam steps. The tenfold rate drop keeps the full
    // protocol's proportion (after 60% of the run): dropping at the absolute
    // epoch 60 of a desk-scale run would spend 85% of the steps at 1e-4,
    // which stalls well short of the denoising bar.
    cfg.epochs = 600;
    cfg.schedule.drop_epoch = 360;

    std::printf("       training: 12-image corpus, sigma 25, %d epochs x 5 batches "
                "(3000 steps, lr drop at epoch %d)\n", cfg.epochs,
                cfg.schedule.drop_epoch);
    const auto t0 = std::chrono::steady_clock::now();
    const TrainRun run = train(cfg);
    const double train_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = expect(static_cast<int>(run.log.size()) == cfg.epochs, "all epochs ran");
    std::printf("       loss: epoch 0 %.4g -> epoch %zu %.4g  (%.1f min wall)\n",
                run.log.front().loss, run.log.size() - 1, run.log.back().loss,
                train_secs / 60.0);

    // smoothed per-epoch loss non-increasing over the first 10 epochs
    // (tolerance: one increasing pair)
    int increases = 0;
    for (std::size_t e = 1; e < 10 && e < run.log.size(); ++e) {
        if (run.log[e].loss > run.log[e - 1].loss) ++increases;
    }
    ok &= expect(increases <= 1, "early training loss non-increasing (<=1 rise)");

    const Checkpoint ckpt = load_checkpoint(run.checkpoint_path);
    const EvalReport report = evaluate(ckpt.model, holdout.string(), NoiseSpec{25.0, 99});
    for (const auto& row : report.rows) {
        std::printf("       %-14s noisy %.3f dB   denoised %.3f dB\n", row.name.c_str(),
                    row.noisy_psnr, row.denoised_psnr);
    }
    std::printf("       mean: noisy %.3f dB, denoised %.3f dB (margin %+.3f dB, "
                "need >= +3)\n",
                report.mean_noisy, report.mean_denoised,
                report.mean_denoised - report.mean_noisy);
    ok &= expect(std::abs(report.mean_noisy - 20.2) < 1.0,
                 "noisy baseline near 10*log10(255^2/25^2) ~ 20.2 dB");
    ok &= expect(report.mean_denoised >= report.mean_noisy + 3.0,
                 "mean denoised PSNR >= noisy baseline + 3 dB");
    return ok;
}

bool criterion_overfit() {
    // One fixed 45x45 patch with one frozen noise sample; training must drive
    // the batch MSE below 1e-4 within 5000 steps at lr 1e-3.
    const Image clean_img = make_synthetic_image(0, 45, 1, 31337);
    Rng noise_rng(4242);
    Tensor4 noisy = Tensor4::uninit({1, 1, 45, 45});
    Tensor4 label = Tensor4::uninit({1, 1, 45, 45});
    for (std::int64_t i = 0; i < noisy.size(); ++i) {
        const double n = (25.0 / 255.0) * noise_rng.gaussian();
        noisy[i] = clean_img.pixels[static_cast<std::size_t>(i)] + n;
        label[i] = n;
    }

    Model model = build_model(miniature_config(), 11);
    model.mode = Mode::train;
    auto params = collect_params(model);
    Model grads = zero_grads_like(model);
    auto grefs = collect_params(grads);
    AdamState adam = AdamState::for_params(params);

    double mse = 1e30;
    int steps = 0;
    while (steps < 5000 && mse >= 1e-4) {
        ModelCache cache;
        const Tensor4 pred = model_forward(model, noisy, &cache);
        auto [loss, dloss] = mse_loss(pred, label);
        mse = loss;
        if (mse < 1e-4) break;
        for (auto& ref : collect_state(grads)) std::fill(ref.data, ref.data + ref.size, 0.0);
        model_backward(model, cache, dloss, grads);
        adam_step(adam, params, grefs, 1e-3);
        ++steps;
    }
    std::printf("       MSE %.3g after %d steps (limit 5000, target < 1e-4)\n", mse, steps);
    return expect(mse < 1e-4, "single-patch overfit MSE < 1e-4 within 5000 steps");
}

bool criterion_determinism() {
    const fs::path corpus = workspace() / "det_corpus";
    write_synthetic_corpus(corpus.string(), 3, 64, 1, 555);

    auto make_cfg = [&](const fs::path& out) {
        TrainConfig c;
        c.model = miniature_config();
        c.sigma = 25.0;
        c.epochs = 3;
        c.batch_size = 8;
        c.patch_size = 32;
        c.patch_stride = 32;
        c.val_fraction = 0.0;
        c.validate_every = 0;
        c.seed = 99;
        c.corpus_dir = corpus.string();
        c.out_dir = out.string();
        return c;
    };

    auto bytes_of = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };

    const TrainRun a = train(make_cfg(workspace() / "det_a"));
    const TrainRun b = train(make_cfg(workspace() / "det_b"));
    bool ok = expect(bytes_of(a.checkpoint_path) == bytes_of(b.checkpoint_path),
                     "same master seed -> bitwise-identical checkpoints");

    // save/load roundtrip is bit-exact
    Checkpoint loaded = load_checkpoint(a.checkpoint_path);
    const fs::path resaved = workspace() / "det_resaved.bin";
    save_checkpoint(loaded.model, &*loaded.optimizer, loaded.epoch, loaded.master_seed,
                    resaved.string());
    ok &= expect(bytes_of(a.checkpoint_path) == bytes_of(resaved),
                 "checkpoint save/load/save is byte-identical");

    // resume from epoch 1 reproduces the uninterrupted trajectory
    TrainConfig half = make_cfg(workspace() / "det_half");
    half.epochs = 1;
    train(half);
    TrainConfig rest = make_cfg(workspace() / "det_half");
    rest.epochs = 3;
    rest.resume_from = (workspace() / "det_half" / "ckpt_latest.bin").string();
    const TrainRun resumed = train(rest);
    ok &= expect(resumed.log.size() == 2 && resumed.log[0].loss == a.log[1].loss &&
                     resumed.log[1].loss == a.log[2].loss,
                 "resumed loss trajectory equals the uninterrupted run");
    ok &= expect(bytes_of(a.checkpoint_path) ==
                     bytes_of(workspace() / "det_half" / "ckpt_latest.bin"),
                 "resumed final checkpoint equals the uninterrupted one");
    return ok;
}

bool criterion_metrics() {
    Image a = Image::zeros(1, 8, 8);
    Image b = Image::zeros(1, 8, 8);
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        a.pixels[i] = 100.0 / 255.0;
        b.pixels[i] = 125.0 / 255.0;
    }
    const PsnrResult mid = psnr(a, b);
    Image white = Image::zeros(1, 4, 4);
    for (auto& v : white.pixels) v = 1.0;
    const PsnrResult extremes = psnr(Image::zeros(1, 4, 4), white);
    std::printf("       MSE-625 pair: %.4f dB; identical: %s; 0-vs-255: %.4f dB\n",
                mid.psnr_db, std::isinf(psnr(a, a).psnr_db) ? "inf" : "finite",
                extremes.psnr_db);
    bool ok = expect(std::abs(mid.psnr_db - 20.17) < 0.01, "MSE-625 pair is 20.17 +- 0.01 dB");
    ok &= expect(std::isinf(psnr(a, a).psnr_db), "identical images report infinity");
    ok &= expect(extremes.psnr_db == 0.0, "0-vs-255 images report 0 dB");
    return ok;
}

bool criterion_receptive_field() {
    const int stack = receptive_field({{3, 1}, {3, 2}, {3, 5}});
    const int full = receptive_field(model_layer_stack(ModelConfig::gray()));
    std::printf("       [1,2,5] stack: %d (expect 17); full gray model: %d (expect 57)\n",
                stack, full);
    return expect(stack == 17, "three-layer stack RF == 17") &
           expect(full == 57, "full gray model RF == 57");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        bool (*run)();
    };
    const Criterion criteria[] = {
        {1, "HDC worked examples", criterion_hdc},
        {2, "parameter counts", criterion_param_counts},
        {3, "gradient correctness", criterion_gradients},
        {4, "convolution oracle equivalence", criterion_conv_oracle},
        {5, "desk-scale denoising", criterion_desk_scale},
        {6, "overfit sanity", criterion_overfit},
        {7, "determinism & persistence", criterion_determinism},
        {8, "metric correctness", criterion_metrics},
        {9, "receptive field", criterion_receptive_field},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::printf("----- criterion %d: %s\n", c.id, c.name);
        std::fflush(stdout);
        const auto t0 = std::chrono::steady_clock::now();
        const bool ok = c.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("\n%d/9 criteria passed\n", 9 - failures);
    return failures;
}
