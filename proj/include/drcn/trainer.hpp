#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drcn/data.hpp"
#include "drcn/model.hpp"
#include "drcn/optim.hpp"

namespace drcn {

/// Everything a training run needs. Defaults: sigma 25, batch 64, 45x45
/// patches, Adam from 1e-3 dropping tenfold at epoch 60, 100 epochs,
/// dihedral augmentation.
struct TrainConfig {
    ModelConfig model;
    double sigma = 25.0;  // noise level on the 0-255 scale
    int epochs = 100;
    int batch_size = 64;
    int patch_size = 45;
    int patch_stride = 35;
    int max_patches_per_image = 0;  // 0 = every stride window
    bool augment = true;
    double val_fraction = 0.1;
    int validate_every = 1;  // epochs; 0 disables validation
    std::uint64_t seed = 0;
    LrSchedule schedule;
    int threads = 0;  // 0 = automatic
    std::string corpus_dir;
    std::string out_dir;
    std::string resume_from;  // optional checkpoint path

    void validate() const;
};

struct EpochLog {
    int epoch = 0;
    double loss = 0.0;      // mean batch MSE over the epoch
    double val_psnr = 0.0;  // NaN when validation did not run this epoch
    double lr = 0.0;
    double seconds = 0.0;
};

struct TrainRun {
    TrainConfig config;
    std::vector<EpochLog> log;
    int skipped_images = 0;  // corpus images smaller than the patch size
    std::string checkpoint_path;
};

/// Runs the full training loop: per epoch, shuffle patches with an
/// epoch-derived seed, draw augmentation and fresh noise per patch, batches
/// of batch_size, MSE on the residual, Adam at lr_at(epoch). Writes
/// ckpt_latest.bin, train_log.txt and run.json under out_dir. Deterministic
/// in the master seed.
TrainRun train(const TrainConfig& config);

struct EvalRow {
    std::string name;
    double noisy_psnr = 0.0;
    double denoised_psnr = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    double mean_noisy = 0.0;
    double mean_denoised = 0.0;  // arithmetic mean of per-image PSNR
};

/// Whole-image evaluation: per image, seed-derived noise, full-image
/// denoising (no patching), PSNR against the clean original. The model must
/// be in infer mode.
EvalReport evaluate(const Model& model,
                    const std::vector<std::pair<std::string, Image>>& images,
                    const NoiseSpec& noise);
EvalReport evaluate(const Model& model, const std::string& corpus_dir,
                    const NoiseSpec& noise);

/// Noise seed used for image `index` in evaluate / the denoise CLI.
std::uint64_t eval_noise_seed(std::uint64_t base_seed, std::uint64_t index);

/// Sorted (path, image) list of every PGM/PPM file in a directory.
std::vector<std::pair<std::string, Image>> load_corpus(const std::string& dir);

}  // namespace drcn
