#include "drcn/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drcn/checkpoint.hpp"
#include "drcn/config.hpp"
#include "drcn/hdc.hpp"
#include "drcn/metrics.hpp"
#include "drcn/parallel.hpp"
#include "drcn/trainer.hpp"

namespace drcn {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;  // domain-invalid result
constexpr int kExitIo = 3;

std::vector<int> parse_rates(const std::string& text) {
    std::vector<int> rates;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t used = 0;
        rates.push_back(std::stoi(text.substr(pos), &used));
        pos += used;
        if (pos < text.size()) {
            if (text[pos] != ',') throw ConfigError("rates must be comma-separated integers");
            ++pos;
        }
    }
    if (rates.empty()) throw ConfigError("at least one dilation rate is required");
    return rates;
}

// "K:r" pairs, e.g. "3:1,3:2,3:5".
std::vector<std::pair<int, int>> parse_layers(const std::string& text) {
    std::vector<std::pair<int, int>> layers;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t used = 0;
        const int kernel = std::stoi(text.substr(pos), &used);
        pos += used;
        if (pos >= text.size() || text[pos] != ':') {
            throw ConfigError("layers must be K:r pairs, e.g. 3:1,3:2,3:5");
        }
        ++pos;
        const int dilation = std::stoi(text.substr(pos), &used);
        pos += used;
        layers.emplace_back(kernel, dilation);
        if (pos < text.size()) {
            if (text[pos] != ',') throw ConfigError("layer pairs must be comma-separated");
            ++pos;
        }
    }
    if (layers.empty()) throw ConfigError("at least one layer is required");
    return layers;
}

std::string gaps_to_string(const std::vector<int>& gaps) {
    std::string s = "[";
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(gaps[i]);
    }
    return s + "]";
}

int cmd_validate_hdc(const std::string& rates_text, int kernel) {
    const DilationPattern pattern{parse_rates(rates_text), kernel};
    const HdcReport report = hdc_validate(pattern);
    const int checked = report.gaps.size() >= 2 ? 2 : 1;
    std::printf("rates = %s  K = %d\n", gaps_to_string(pattern.rates).c_str(), kernel);
    std::printf("M = %s  %s (M%d = %d %s K)\n", gaps_to_string(report.gaps).c_str(),
                report.valid ? "VALID" : "INVALID", checked,
                report.gaps[static_cast<std::size_t>(checked - 1)],
                report.valid ? "<=" : ">");
    return report.valid ? kExitOk : kExitInvalid;
}

int cmd_rf(const std::string& layers_text) {
    std::printf("receptive field: %d\n", receptive_field(parse_layers(layers_text)));
    return kExitOk;
}

Model load_model_for_cli(const std::string& ckpt_path, const std::string& preset,
                         const std::string& config_path, std::uint64_t seed) {
    if (!ckpt_path.empty()) return load_checkpoint(ckpt_path).model;
    ModelConfig config;
    if (!config_path.empty()) {
        config = load_train_config(config_path).model;
    } else if (preset == "gray") {
        config = ModelConfig::gray();
    } else if (preset == "color") {
        config = ModelConfig::color();
    } else {
        throw ConfigError("unknown preset '" + preset + "' (expected gray or color)");
    }
    Model m = build_model(config, seed);
    m.mode = Mode::infer;
    return m;
}

int cmd_info(const std::string& ckpt_path, const std::string& preset,
             const std::string& config_path) {
    Model model = load_model_for_cli(ckpt_path, preset, config_path, 0);
    const ParamCountReport counts = count_params(model);
    const auto stack = model_layer_stack(model.config);

    std::printf("config: %s\n", model_config_to_json(model.config).dump().c_str());
    std::printf("depth: %d layers\n", model.config.depth());
    std::printf("receptive field: %d\n", receptive_field(stack));
    std::printf("\n%-28s %10s\n", "parameter", "count");
    for (const auto& row : counts.rows) {
        std::printf("%-28s %10" PRId64 "\n", row.name.c_str(), row.count);
    }
    std::printf("\nconv weights: %" PRId64 "\n", counts.conv_weights);
    std::printf("conv biases:  %" PRId64 "\n", counts.conv_biases);
    std::printf("bn params:    %" PRId64 "\n", counts.bn_params);
    std::printf("prelu params: %" PRId64 "\n", counts.prelu_params);
    std::printf("total:        %" PRId64 "\n", counts.total);
    return kExitOk;
}

int cmd_denoise(const std::string& ckpt_path, const std::string& in_path,
                const std::string& out_path, double sigma, std::uint64_t seed) {
    Model model = load_checkpoint(ckpt_path).model;
    const Image input = read_image(in_path);
    if (input.channels != model.config.input_channels) {
        throw ConfigError("image '" + in_path + "' has " + std::to_string(input.channels) +
                          " channels but the model expects " +
                          std::to_string(model.config.input_channels));
    }

    Image noisy = input;
    if (sigma > 0.0) {
        // The input is treated as clean; noise is injected with the same
        // per-image seed derivation `eval` uses for image index 0.
        noisy = add_gaussian_noise(input, {sigma, eval_noise_seed(seed, 0)});
    }
    const Image restored = Image::from_tensor(denoise(model, noisy.to_tensor()));
    write_image(restored, out_path);

    if (sigma > 0.0) {
        std::printf("noisy    PSNR: %.10f dB\n", psnr(noisy, input).psnr_db);
        std::printf("denoised PSNR: %.10f dB\n", psnr(restored, input).psnr_db);
    }
    std::printf("wrote %s\n", out_path.c_str());
    return kExitOk;
}

int cmd_eval(const std::string& ckpt_path, const std::string& dir, double sigma,
             std::uint64_t seed, const std::string& json_path) {
    Model model = load_checkpoint(ckpt_path).model;
    const EvalReport report = evaluate(model, dir, NoiseSpec{sigma, seed});

    std::printf("%-24s %12s %14s\n", "image", "noisy dB", "denoised dB");
    for (const auto& row : report.rows) {
        std::printf("%-24s %12.4f %14.4f\n", row.name.c_str(), row.noisy_psnr,
                    row.denoised_psnr);
    }
    std::printf("%-24s %12.4f %14.4f\n", "mean", report.mean_noisy, report.mean_denoised);

    if (!json_path.empty()) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : report.rows) {
            rows.push_back({{"image", row.name},
                            {"noisy_psnr", row.noisy_psnr},
                            {"denoised_psnr", row.denoised_psnr}});
        }
        const nlohmann::json j = {{"sigma", sigma},
                                  {"seed", seed},
                                  {"rows", rows},
                                  {"mean_noisy_psnr", report.mean_noisy},
                                  {"mean_denoised_psnr", report.mean_denoised}};
        if (json_path == "-") {
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::ofstream out(json_path, std::ios::trunc);
            if (!out) throw IoError("cannot open '" + json_path + "' for writing");
            out << j.dump(2) << "\n";
        }
    }
    return kExitOk;
}

int cmd_train(const std::string& config_path, const CLI::App& sub, int epochs,
              double sigma, std::uint64_t seed, const std::string& corpus,
              const std::string& out_dir, const std::string& resume, int threads) {
    TrainConfig config = config_path.empty() ? TrainConfig{} : load_train_config(config_path);
    // Flags override the config file.
    if (sub.count("--epochs")) config.epochs = epochs;
    if (sub.count("--sigma")) config.sigma = sigma;
    if (sub.count("--seed")) config.seed = seed;
    if (sub.count("--corpus")) config.corpus_dir = corpus;
    if (sub.count("--out-dir")) config.out_dir = out_dir;
    if (sub.count("--resume")) config.resume_from = resume;
    if (sub.count("--threads")) config.threads = threads;

    const TrainRun run = train(config);
    if (!run.log.empty()) {
        std::printf("trained %zu epochs, final loss %.6g\n", run.log.size(),
                    run.log.back().loss);
    }
    std::printf("checkpoint: %s\n", run.checkpoint_path.c_str());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Multiscale dilated-residual denoiser"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a denoiser from a JSON config");
    std::string train_config_path, train_corpus, train_out, train_resume;
    int train_epochs = 0, train_threads = 0;
    double train_sigma = 0.0;
    std::uint64_t train_seed = 0;
    train_cmd->add_option("--config", train_config_path, "JSON run config");
    train_cmd->add_option("--epochs", train_epochs, "override train.epochs");
    train_cmd->add_option("--sigma", train_sigma, "override train.sigma");
    train_cmd->add_option("--seed", train_seed, "override train.seed");
    train_cmd->add_option("--corpus", train_corpus, "override paths.corpus");
    train_cmd->add_option("--out-dir", train_out, "override paths.out_dir");
    train_cmd->add_option("--resume", train_resume, "resume from a checkpoint");
    train_cmd->add_option("--threads", train_threads, "worker threads (0 = auto)");

    // denoise
    auto* denoise_cmd = app.add_subcommand("denoise", "Denoise a single PGM/PPM image");
    std::string dn_model, dn_in, dn_out;
    double dn_sigma = 0.0;
    std::uint64_t dn_seed = 0;
    denoise_cmd->add_option("--model", dn_model, "checkpoint file")->required();
    denoise_cmd->add_option("--in", dn_in, "input image")->required();
    denoise_cmd->add_option("--out", dn_out, "output image")->required();
    denoise_cmd->add_option("--sigma", dn_sigma,
                            "treat the input as clean and add noise first");
    denoise_cmd->add_option("--seed", dn_seed, "noise seed (with --sigma)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "PSNR table over a corpus directory");
    std::string ev_model, ev_dir, ev_json;
    double ev_sigma = 25.0;
    std::uint64_t ev_seed = 0;
    eval_cmd->add_option("--model", ev_model, "checkpoint file")->required();
    eval_cmd->add_option("--dir", ev_dir, "corpus directory")->required();
    eval_cmd->add_option("--sigma", ev_sigma, "noise level on the 0-255 scale");
    eval_cmd->add_option("--seed", ev_seed, "noise seed");
    eval_cmd->add_option("--json", ev_json, "write the report as JSON ('-' for stdout)");

    // validate-hdc
    auto* hdc_cmd = app.add_subcommand("validate-hdc", "Check a dilation pattern");
    std::string hdc_rates;
    int hdc_kernel = 3;
    hdc_cmd->add_option("--rates", hdc_rates, "comma-separated rates, e.g. 1,2,5")
        ->required();
    hdc_cmd->add_option("--kernel", hdc_kernel, "kernel size K (default 3)");

    // rf
    auto* rf_cmd = app.add_subcommand("rf", "Receptive field of a K:r layer stack");
    std::string rf_layers;
    rf_cmd->add_option("--layers", rf_layers, "e.g. 3:1,3:2,3:5")->required();

    // info
    auto* info_cmd = app.add_subcommand("info", "Model config, parameter counts, RF");
    std::string info_model, info_preset = "gray", info_config;
    info_cmd->add_option("--model", info_model, "checkpoint file");
    info_cmd->add_option("--preset", info_preset, "gray or color (fresh model)");
    info_cmd->add_option("--config", info_config, "JSON config for a fresh model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(train_cmd)) {
            return cmd_train(train_config_path, *train_cmd, train_epochs, train_sigma,
                             train_seed, train_corpus, train_out, train_resume,
                             train_threads);
        }
        if (app.got_subcommand(denoise_cmd)) {
            return cmd_denoise(dn_model, dn_in, dn_out, dn_sigma, dn_seed);
        }
        if (app.got_subcommand(eval_cmd)) {
            return cmd_eval(ev_model, ev_dir, ev_sigma, ev_seed, ev_json);
        }
        if (app.got_subcommand(hdc_cmd)) {
            return cmd_validate_hdc(hdc_rates, hdc_kernel);
        }
        if (app.got_subcommand(rf_cmd)) {
            return cmd_rf(rf_layers);
        }
        if (app.got_subcommand(info_cmd)) {
            return cmd_info(info_model, info_preset, info_config);
        }
        std::fprintf(stderr, "error: no subcommand given\n");
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}

}  // namespace drcn
