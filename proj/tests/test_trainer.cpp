#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "drcn/checkpoint.hpp"
#include "drcn/metrics.hpp"
#include "drcn/trainer.hpp"

using namespace drcn;

namespace fs = std::filesystem;

namespace {

ModelConfig tiny_model() {
    ModelConfig c;
    c.feature_channels = 8;
    c.multiscale = {{3, 2}, {5, 2}, {7, 4}};
    c.num_blocks = 1;
    return c;
}

TrainConfig tiny_run(const fs::path& corpus, const fs::path& out) {
    TrainConfig c;
    c.model = tiny_model();
    c.sigma = 25.0;
    c.epochs = 2;
    c.batch_size = 8;
    c.patch_size = 24;
    c.patch_stride = 24;
    c.val_fraction = 0.0;
    c.validate_every = 0;
    c.seed = 41;
    c.corpus_dir = corpus.string();
    c.out_dir = out.string();
    return c;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("train: identical seeds give bitwise-identical checkpoints") {
    const fs::path corpus = fresh_dir("drcn_train_corpus");
    write_synthetic_corpus(corpus.string(), 3, 48, 1, 7);

    const fs::path out_a = fresh_dir("drcn_train_a");
    const fs::path out_b = fresh_dir("drcn_train_b");
    const TrainRun run_a = train(tiny_run(corpus, out_a));
    const TrainRun run_b = train(tiny_run(corpus, out_b));

    REQUIRE(run_a.log.size() == 2);
    REQUIRE(run_b.log.size() == 2);
    for (std::size_t i = 0; i < run_a.log.size(); ++i) {
        CHECK(run_a.log[i].loss == run_b.log[i].loss);  // bitwise
        CHECK(std::isfinite(run_a.log[i].loss));
    }
    CHECK(file_bytes(out_a / "ckpt_latest.bin") == file_bytes(out_b / "ckpt_latest.bin"));

    // a different seed diverges
    const fs::path out_c = fresh_dir("drcn_train_c");
    TrainConfig other = tiny_run(corpus, out_c);
    other.seed = 42;
    const TrainRun run_c = train(other);
    CHECK(run_c.log[0].loss != run_a.log[0].loss);
}

TEST_CASE("train: resume reproduces the uninterrupted run bitwise") {
    const fs::path corpus = fresh_dir("drcn_resume_corpus");
    write_synthetic_corpus(corpus.string(), 3, 48, 1, 13);

    // uninterrupted 4 epochs
    const fs::path out_full = fresh_dir("drcn_resume_full");
    TrainConfig full = tiny_run(corpus, out_full);
    full.epochs = 4;
    const TrainRun run_full = train(full);

    // 2 epochs, then resume to 4
    const fs::path out_half = fresh_dir("drcn_resume_half");
    TrainConfig half = tiny_run(corpus, out_half);
    half.epochs = 2;
    train(half);

    TrainConfig rest = tiny_run(corpus, out_half);
    rest.epochs = 4;
    rest.resume_from = (out_half / "ckpt_latest.bin").string();
    const TrainRun run_rest = train(rest);

    REQUIRE(run_rest.log.size() == 2);  // epochs 2 and 3
    CHECK(run_rest.log[0].epoch == 2);
    CHECK(run_rest.log[0].loss == run_full.log[2].loss);
    CHECK(run_rest.log[1].loss == run_full.log[3].loss);
    CHECK(file_bytes(out_full / "ckpt_latest.bin") ==
          file_bytes(out_half / "ckpt_latest.bin"));

    // the text log carries all four epochs after the resumed run
    const std::string log_text = file_bytes(out_half / "train_log.txt");
    CHECK(log_text.find("epoch=0 ") != std::string::npos);
    CHECK(log_text.find("epoch=3 ") != std::string::npos);

    // resuming under a different model config is rejected
    TrainConfig wrong = tiny_run(corpus, fresh_dir("drcn_resume_wrong"));
    wrong.model.num_blocks = 2;
    wrong.resume_from = (out_half / "ckpt_latest.bin").string();
    CHECK_THROWS_AS(train(wrong), ConfigError);
}

TEST_CASE("train: per-epoch validation PSNR and run.json") {
    const fs::path corpus = fresh_dir("drcn_val_corpus");
    write_synthetic_corpus(corpus.string(), 4, 48, 1, 23);

    const fs::path out = fresh_dir("drcn_val_out");
    TrainConfig cfg = tiny_run(corpus, out);
    cfg.val_fraction = 0.25;
    cfg.validate_every = 1;
    const TrainRun run = train(cfg);

    for (const auto& row : run.log) {
        CHECK(std::isfinite(row.val_psnr));
        CHECK(row.val_psnr > 5.0);
    }
    CHECK(fs::exists(out / "run.json"));
    CHECK(fs::exists(out / "config.json"));
    const std::string summary = file_bytes(out / "run.json");
    CHECK(summary.find("\"val_psnr\"") != std::string::npos);
    CHECK(summary.find("\"kernel_backend\"") != std::string::npos);
}

TEST_CASE("train: undersized corpus images are skipped and counted") {
    const fs::path corpus = fresh_dir("drcn_skip_corpus");
    write_synthetic_corpus(corpus.string(), 2, 48, 1, 31);
    write_image(Image::zeros(1, 10, 10), (corpus / "small.pgm").string());

    const fs::path out = fresh_dir("drcn_skip_out");
    TrainConfig cfg = tiny_run(corpus, out);
    cfg.epochs = 1;
    const TrainRun run = train(cfg);
    CHECK(run.skipped_images == 1);

    // a corpus with only undersized images cannot train
    const fs::path tiny_corpus = fresh_dir("drcn_skip_tiny");
    write_image(Image::zeros(1, 10, 10), (tiny_corpus / "a.pgm").string());
    TrainConfig bad = tiny_run(tiny_corpus, fresh_dir("drcn_skip_tiny_out"));
    CHECK_THROWS_AS(train(bad), ConfigError);

    // an empty corpus directory is rejected up front
    TrainConfig empty = tiny_run(fresh_dir("drcn_skip_empty"),
                                 fresh_dir("drcn_skip_empty_out"));
    CHECK_THROWS_AS(train(empty), ConfigError);
}

TEST_CASE("train: non-finite loss aborts with the batch's provenance") {
    const fs::path corpus = fresh_dir("drcn_nan_corpus");
    write_synthetic_corpus(corpus.string(), 2, 48, 1, 37);
    const fs::path out = fresh_dir("drcn_nan_out");

    // poison a checkpoint so the first forward pass overflows
    Model m = build_model(tiny_model(), 1);
    for (std::int64_t i = 0; i < m.last.weights.size(); ++i) {
        m.last.weights[i] = 1e300;
    }
    const std::string poisoned = (out / "poisoned.bin").string();
    fs::create_directories(out);
    save_checkpoint(m, nullptr, 0, 41, poisoned);

    TrainConfig cfg = tiny_run(corpus, out);
    cfg.resume_from = poisoned;
    CHECK_THROWS_WITH_AS(train(cfg), doctest::Contains("source image"), NumericError);
}

TEST_CASE("evaluate: rigged zero-residual model reports the noisy baseline") {
    Model m = build_model(tiny_model(), 3);
    for (std::int64_t i = 0; i < m.last.weights.size(); ++i) m.last.weights[i] = 0.0;
    for (double& b : m.last.bias) b = 0.0;
    m.mode = Mode::infer;

    std::vector<std::pair<std::string, Image>> images;
    for (int i = 0; i < 3; ++i) {
        images.emplace_back("img" + std::to_string(i),
                            make_synthetic_image(i, 64, 1, 1000 + i));
    }

    const EvalReport report = evaluate(m, images, NoiseSpec{25.0, 5});
    REQUIRE(report.rows.size() == 3);
    double mean_noisy = 0.0, mean_denoised = 0.0;
    for (const auto& row : report.rows) {
        // denoise(y) with zero residual is clamp(y); PSNR quantization clamps
        // identically, so the two columns agree exactly
        CHECK(row.denoised_psnr == row.noisy_psnr);
        // sigma=25 baseline is about 20.2 dB
        CHECK(std::abs(row.noisy_psnr - 20.2) < 0.3);
        mean_noisy += row.noisy_psnr;
        mean_denoised += row.denoised_psnr;
    }
    // dataset aggregation = arithmetic mean of per-image PSNR
    CHECK(report.mean_noisy == doctest::Approx(mean_noisy / 3.0).epsilon(1e-12));
    CHECK(report.mean_denoised == doctest::Approx(mean_denoised / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(evaluate(m, std::vector<std::pair<std::string, Image>>{},
                             NoiseSpec{25.0, 5}),
                    ConfigError);

    // train-mode models must not be evaluated
    Model train_mode = build_model(tiny_model(), 3);
    CHECK_THROWS_AS(evaluate(train_mode, images, NoiseSpec{25.0, 5}), ModeError);
}

TEST_CASE("train: color corpus end to end") {
    const fs::path corpus = fresh_dir("drcn_color_corpus");
    write_synthetic_corpus(corpus.string(), 3, 48, 3, 61);

    const fs::path out = fresh_dir("drcn_color_out");
    TrainConfig cfg = tiny_run(corpus, out);
    cfg.model.input_channels = 3;
    cfg.epochs = 1;
    const TrainRun run = train(cfg);
    REQUIRE(run.log.size() == 1);
    CHECK(std::isfinite(run.log[0].loss));

    const Checkpoint ckpt = load_checkpoint(run.checkpoint_path);
    CHECK(ckpt.model.config.input_channels == 3);
    const EvalReport report = evaluate(ckpt.model, corpus.string(), NoiseSpec{25.0, 3});
    CHECK(report.rows.size() == 3);
    for (const auto& row : report.rows) CHECK(std::isfinite(row.denoised_psnr));

    // gray model rejects a color corpus up front
    TrainConfig mismatched = tiny_run(corpus, fresh_dir("drcn_color_bad"));
    CHECK_THROWS_AS(train(mismatched), ConfigError);
}

TEST_CASE("train: loss decreases over a short run") {
    const fs::path corpus = fresh_dir("drcn_learn_corpus");
    write_synthetic_corpus(corpus.string(), 3, 48, 1, 53);

    const fs::path out = fresh_dir("drcn_learn_out");
    TrainConfig cfg = tiny_run(corpus, out);
    cfg.epochs = 10;
    const TrainRun run = train(cfg);
    REQUIRE(run.log.size() == 10);
    CHECK(run.log.back().loss < run.log.front().loss);
    CHECK(run.log.front().lr == 1e-3);
}
