#pragma once

#include <string>

#include <json.hpp>

#include "drcn/model.hpp"
#include "drcn/trainer.hpp"

// JSON (de)serialization for configuration documents. Parsing is strict:
// unknown keys are rejected so misspelled options fail loudly instead of
// silently falling back to defaults. All keys are optional.

namespace drcn {

nlohmann::json model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j,
                                   const std::string& where = "model");

nlohmann::json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

/// Reads and parses a train config file (throws IoError / ParseError /
/// ConfigError).
TrainConfig load_train_config(const std::string& path);

}  // namespace drcn
