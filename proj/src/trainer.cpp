#include "drcn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "drcn/checkpoint.hpp"
#include "drcn/config.hpp"
#include "drcn/kernels.hpp"
#include "drcn/metrics.hpp"
#include "drcn/parallel.hpp"
#include "drcn/rng.hpp"

namespace drcn {

namespace fs = std::filesystem;

void TrainConfig::validate() const {
    model.validate();
    if (!(sigma > 0.0)) throw ConfigError("train.sigma must be positive");
    if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (patch_size < 1) throw ConfigError("train.patch_size must be >= 1");
    if (patch_stride < 1) throw ConfigError("train.patch_stride must be >= 1");
    if (max_patches_per_image < 0) {
        throw ConfigError("train.max_patches_per_image must be >= 0");
    }
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw ConfigError("train.val_fraction must be in [0, 1)");
    }
    if (validate_every < 0) throw ConfigError("train.validate_every must be >= 0");
    if (corpus_dir.empty()) throw ConfigError("paths.corpus is required");
    if (out_dir.empty()) throw ConfigError("paths.out_dir is required");
}

std::vector<std::pair<std::string, Image>> load_corpus(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("corpus directory '" + dir + "' does not exist");
    }
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<std::pair<std::string, Image>> images;
    images.reserve(paths.size());
    for (const auto& p : paths) images.emplace_back(p, read_image(p));
    return images;
}

std::uint64_t eval_noise_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix_seed({base_seed, stream::kEvalNoise, index});
}

namespace {

void shuffle_indices(std::vector<int>& idx, std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(idx[i - 1], idx[j]);
    }
}

void zero_params(Model& grads) {
    for (auto& ref : collect_state(grads)) std::fill(ref.data, ref.data + ref.size, 0.0);
}

std::string format_epoch_line(const EpochLog& row) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "epoch=%d loss=%.17g val_psnr=%.17g lr=%.17g seconds=%.3f",
                  row.epoch, row.loss, row.val_psnr, row.lr, row.seconds);
    return line;
}

nlohmann::json run_to_json(const TrainRun& run) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : run.log) {
        rows.push_back({{"epoch", row.epoch},
                        {"loss", row.loss},
                        {"val_psnr", std::isfinite(row.val_psnr)
                                         ? nlohmann::json(row.val_psnr)
                                         : nlohmann::json(nullptr)},
                        {"lr", row.lr},
                        {"seconds", row.seconds}});
    }
    return {{"config", train_config_to_json(run.config)},
            {"epochs", rows},
            {"skipped_images", run.skipped_images},
            {"checkpoint", run.checkpoint_path},
            {"kernel_backend", kernels::active().name},
            {"threads", thread_count()}};
}

}  // namespace

TrainRun train(const TrainConfig& config) {
    config.validate();
    if (config.threads > 0) set_thread_count(config.threads);

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + config.out_dir +
                      "': " + ec.message());
    }

    TrainRun run;
    run.config = config;

    // --- corpus ---
    auto corpus = load_corpus(config.corpus_dir);
    if (corpus.empty()) {
        throw ConfigError("corpus '" + config.corpus_dir + "' contains no PGM/PPM images");
    }
    for (const auto& [path, img] : corpus) {
        if (img.channels != config.model.input_channels) {
            throw ConfigError("image '" + path + "' has " + std::to_string(img.channels) +
                              " channels but the model expects " +
                              std::to_string(config.model.input_channels));
        }
    }

    // Deterministic validation split over image indices.
    std::vector<int> image_ids(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) image_ids[i] = static_cast<int>(i);
    std::size_t val_count = 0;
    if (config.val_fraction > 0.0 && corpus.size() >= 2) {
        shuffle_indices(image_ids, mix_seed({config.seed, stream::kSplit}));
        val_count = std::max<std::size_t>(
            1, static_cast<std::size_t>(config.val_fraction * corpus.size()));
    }
    std::vector<int> val_ids(image_ids.begin(), image_ids.begin() + val_count);
    std::vector<int> train_ids(image_ids.begin() + val_count, image_ids.end());
    std::sort(val_ids.begin(), val_ids.end());
    std::sort(train_ids.begin(), train_ids.end());

    // --- patches ---
    std::vector<Patch> patches;
    for (int id : train_ids) {
        const Image& img = corpus[static_cast<std::size_t>(id)].second;
        if (img.h < config.patch_size || img.w < config.patch_size) {
            std::fprintf(stderr, "warning: skipping '%s' (smaller than %dx%d patch)\n",
                         corpus[static_cast<std::size_t>(id)].first.c_str(),
                         config.patch_size, config.patch_size);
            ++run.skipped_images;
            continue;
        }
        auto img_patches = extract_patches(img, config.patch_size, config.patch_stride, id);
        if (config.max_patches_per_image > 0 &&
            static_cast<int>(img_patches.size()) > config.max_patches_per_image) {
            std::vector<int> pick(img_patches.size());
            for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = static_cast<int>(i);
            shuffle_indices(pick, mix_seed({config.seed, stream::kShuffle,
                                            0xbeefULL, static_cast<std::uint64_t>(id)}));
            pick.resize(static_cast<std::size_t>(config.max_patches_per_image));
            std::sort(pick.begin(), pick.end());
            std::vector<Patch> subset;
            subset.reserve(pick.size());
            for (int i : pick) subset.push_back(std::move(img_patches[static_cast<std::size_t>(i)]));
            img_patches = std::move(subset);
        }
        for (auto& p : img_patches) patches.push_back(std::move(p));
    }
    if (patches.empty()) {
        throw ConfigError("no training patches: every corpus image is smaller than " +
                          std::to_string(config.patch_size) + "x" +
                          std::to_string(config.patch_size));
    }

    // --- model and optimizer state (fresh or resumed) ---
    Model model;
    AdamState adam;
    int start_epoch = 0;
    if (!config.resume_from.empty()) {
        Checkpoint ckpt = load_checkpoint(config.resume_from);
        if (!(ckpt.model.config == config.model)) {
            throw ConfigError("checkpoint '" + config.resume_from +
                              "' was built for a different model configuration");
        }
        model = std::move(ckpt.model);
        adam = ckpt.optimizer ? std::move(*ckpt.optimizer)
                              : AdamState::for_params(collect_params(model));
        start_epoch = static_cast<int>(ckpt.epoch);
    } else {
        model = build_model(config.model, config.seed);
        adam = AdamState::for_params(collect_params(model));
    }
    model.mode = Mode::train;
    auto params = collect_params(model);
    Model grads = zero_grads_like(model);
    auto grad_refs = collect_params(grads);

    const std::string ckpt_path = (fs::path(config.out_dir) / "ckpt_latest.bin").string();
    run.checkpoint_path = ckpt_path;

    std::ofstream log_file(fs::path(config.out_dir) / "train_log.txt",
                           start_epoch > 0 ? std::ios::app : std::ios::trunc);
    if (!log_file) throw IoError("cannot open train_log.txt under '" + config.out_dir + "'");

    {
        std::ofstream cfg_out(fs::path(config.out_dir) / "config.json", std::ios::trunc);
        cfg_out << train_config_to_json(config).dump(2) << "\n";
    }

    // --- epochs ---
    std::vector<int> order(patches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    for (int epoch = start_epoch; epoch < config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const double lr = config.schedule.at(epoch);
        // Reset to identity first: the epoch's order must be a pure function
        // of (seed, epoch) so resumed runs replay the same batches.
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        shuffle_indices(order, mix_seed({config.seed, stream::kShuffle,
                                         static_cast<std::uint64_t>(epoch)}));

        double loss_sum = 0.0;
        int batches = 0;
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
            PatchBatch batch = make_patch_batch(patches, order, begin, end, config.sigma,
                                                config.seed, epoch, config.augment);

            ModelCache cache;
            Tensor4 pred = model_forward(model, batch.noisy, &cache);
            auto [loss, dloss] = mse_loss(pred, batch.residual_label);
            if (!std::isfinite(loss)) {
                const auto& m = batch.meta.front();
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                                   " (first patch: source image " +
                                   std::to_string(m.source_image) + ", augmentation " +
                                   std::to_string(m.augmentation) + ", noise seed " +
                                   std::to_string(m.noise_seed) + ")");
            }
            zero_params(grads);
            model_backward(model, cache, dloss, grads);
            adam_step(adam, params, grad_refs, lr);
            loss_sum += loss;
            ++batches;
        }

        EpochLog row;
        row.epoch = epoch;
        row.loss = loss_sum / batches;
        row.lr = lr;
        row.val_psnr = std::numeric_limits<double>::quiet_NaN();

        if (config.validate_every > 0 && !val_ids.empty() &&
            (epoch + 1) % config.validate_every == 0) {
            model.mode = Mode::infer;
            double total = 0.0;
            for (int id : val_ids) {
                const Image& clean = corpus[static_cast<std::size_t>(id)].second;
                const NoiseSpec vn{config.sigma,
                                   mix_seed({config.seed, stream::kValNoise,
                                             static_cast<std::uint64_t>(id)})};
                const Image noisy = add_gaussian_noise(clean, vn);
                const Image restored = Image::from_tensor(denoise(model, noisy.to_tensor()));
                total += psnr(restored, clean).psnr_db;
            }
            row.val_psnr = total / static_cast<double>(val_ids.size());
            model.mode = Mode::train;
        }

        save_checkpoint(model, &adam, static_cast<std::uint64_t>(epoch + 1), config.seed,
                        ckpt_path);

        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run.log.push_back(row);
        log_file << format_epoch_line(row) << "\n";
        log_file.flush();
        if (!log_file) throw IoError("failed writing train_log.txt (disk full?)");
    }

    std::ofstream summary(fs::path(config.out_dir) / "run.json", std::ios::trunc);
    if (!summary) throw IoError("cannot open run.json under '" + config.out_dir + "'");
    summary << run_to_json(run).dump(2) << "\n";
    if (!summary) throw IoError("failed writing run.json");
    return run;
}

EvalReport evaluate(const Model& model,
                    const std::vector<std::pair<std::string, Image>>& images,
                    const NoiseSpec& noise) {
    if (images.empty()) throw ConfigError("evaluate: empty image list");
    EvalReport report;
    double noisy_total = 0.0, denoised_total = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& [path, clean] = images[i];
        const NoiseSpec per_image{noise.sigma, eval_noise_seed(noise.seed, i)};
        const Image noisy = add_gaussian_noise(clean, per_image);
        const Image restored = Image::from_tensor(denoise(model, noisy.to_tensor()));
        EvalRow row;
        row.name = fs::path(path).filename().string();
        row.noisy_psnr = psnr(noisy, clean).psnr_db;
        row.denoised_psnr = psnr(restored, clean).psnr_db;
        noisy_total += row.noisy_psnr;
        denoised_total += row.denoised_psnr;
        report.rows.push_back(std::move(row));
    }
    report.mean_noisy = noisy_total / static_cast<double>(report.rows.size());
    report.mean_denoised = denoised_total / static_cast<double>(report.rows.size());
    return report;
}

EvalReport evaluate(const Model& model, const std::string& corpus_dir,
                    const NoiseSpec& noise) {
    return evaluate(model, load_corpus(corpus_dir), noise);
}

}  // namespace drcn
