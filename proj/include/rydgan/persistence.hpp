#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rydgan/ensemble.hpp"
#include "rydgan/training.hpp"

namespace rydgan {

// Versioned JSON documents. Doubles are written in shortest round-trip form,
// so a save/load cycle reproduces every parameter bit for bit.

nlohmann::json to_json(const GeneratorParams& params);
GeneratorParams generator_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

std::string serialize_learner(const Learner& learner, const TrainConfig& config);
Learner parse_learner(const std::string& text, const std::string& source = "<learner>");
void save_learner(const Learner& learner, const TrainConfig& config, const std::filesystem::path& path);
Learner load_learner(const std::filesystem::path& path);

/// Manifest embeds each member's full learner document.
std::string serialize_ensemble(const Ensemble& ensemble);
Ensemble parse_ensemble(const std::string& text, const std::string& source = "<ensemble>");
void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_ensemble(const std::filesystem::path& path);

}  // namespace rydgan
