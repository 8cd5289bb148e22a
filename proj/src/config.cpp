#include "drcn/config.hpp"

#include <fstream>
#include <set>

#include "drcn/errors.hpp"

namespace drcn {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError("config section '" + where + "' must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in config section '" + where +
                              "'");
        }
    }
}

template <typename T>
void read_if_present(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + where + "." + key + "': " + e.what());
    }
}

}  // namespace

nlohmann::json model_config_to_json(const ModelConfig& config) {
    json ms = json::array();
    for (const auto& [kernel, filters] : config.multiscale) {
        ms.push_back(json::array({kernel, filters}));
    }
    return json{{"input_channels", config.input_channels},
                {"feature_channels", config.feature_channels},
                {"multiscale", ms},
                {"block_dilations", config.block_dilations},
                {"num_blocks", config.num_blocks},
                {"block_kernel", config.block_kernel},
                {"final_kernel", config.final_kernel}};
}

ModelConfig model_config_from_json(const nlohmann::json& j, const std::string& where) {
    reject_unknown_keys(j,
                        {"input_channels", "feature_channels", "multiscale",
                         "block_dilations", "num_blocks", "block_kernel", "final_kernel"},
                        where);
    ModelConfig config;
    read_if_present(j, "input_channels", config.input_channels, where);
    read_if_present(j, "feature_channels", config.feature_channels, where);
    if (j.contains("multiscale")) {
        config.multiscale.clear();
        const auto& ms = j.at("multiscale");
        if (!ms.is_array()) {
            throw ConfigError("'" + where + ".multiscale' must be an array of "
                              "[kernel, filters] pairs");
        }
        for (const auto& entry : ms) {
            if (!entry.is_array() || entry.size() != 2) {
                throw ConfigError("'" + where + ".multiscale' entries must be "
                                  "[kernel, filters] pairs");
            }
            config.multiscale.emplace_back(entry.at(0).get<int>(), entry.at(1).get<int>());
        }
    }
    read_if_present(j, "block_dilations", config.block_dilations, where);
    read_if_present(j, "num_blocks", config.num_blocks, where);
    read_if_present(j, "block_kernel", config.block_kernel, where);
    read_if_present(j, "final_kernel", config.final_kernel, where);
    config.validate();
    return config;
}

nlohmann::json train_config_to_json(const TrainConfig& config) {
    return json{
        {"model", model_config_to_json(config.model)},
        {"train",
         {{"sigma", config.sigma},
          {"epochs", config.epochs},
          {"batch_size", config.batch_size},
          {"patch_size", config.patch_size},
          {"patch_stride", config.patch_stride},
          {"max_patches_per_image", config.max_patches_per_image},
          {"augment", config.augment},
          {"val_fraction", config.val_fraction},
          {"validate_every", config.validate_every},
          {"seed", config.seed},
          {"lr_initial", config.schedule.initial},
          {"lr_drop_epoch", config.schedule.drop_epoch},
          {"threads", config.threads}}},
        {"paths",
         {{"corpus", config.corpus_dir},
          {"out_dir", config.out_dir},
          {"resume_from", config.resume_from}}}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"model", "train", "paths"}, "<root>");
    TrainConfig config;
    if (j.contains("model")) {
        config.model = model_config_from_json(j.at("model"));
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        reject_unknown_keys(t,
                            {"sigma", "epochs", "batch_size", "patch_size", "patch_stride",
                             "max_patches_per_image", "augment", "val_fraction",
                             "validate_every", "seed", "lr_initial", "lr_drop_epoch",
                             "threads"},
                            "train");
        read_if_present(t, "sigma", config.sigma, "train");
        read_if_present(t, "epochs", config.epochs, "train");
        read_if_present(t, "batch_size", config.batch_size, "train");
        read_if_present(t, "patch_size", config.patch_size, "train");
        read_if_present(t, "patch_stride", config.patch_stride, "train");
        read_if_present(t, "max_patches_per_image", config.max_patches_per_image, "train");
        read_if_present(t, "augment", config.augment, "train");
        read_if_present(t, "val_fraction", config.val_fraction, "train");
        read_if_present(t, "validate_every", config.validate_every, "train");
        read_if_present(t, "seed", config.seed, "train");
        read_if_present(t, "lr_initial", config.schedule.initial, "train");
        read_if_present(t, "lr_drop_epoch", config.schedule.drop_epoch, "train");
        read_if_present(t, "threads", config.threads, "train");
    }
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        reject_unknown_keys(p, {"corpus", "out_dir", "resume_from"}, "paths");
        read_if_present(p, "corpus", config.corpus_dir, "paths");
        read_if_present(p, "out_dir", config.out_dir, "paths");
        read_if_present(p, "resume_from", config.resume_from, "paths");
    }
    return config;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return train_config_from_json(j);
}

}  // namespace drcn
