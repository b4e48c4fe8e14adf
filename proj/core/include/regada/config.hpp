#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "regada/adam.hpp"
#include "regada/objective.hpp"
#include "regada/synth.hpp"
#include "regada/text_encoder.hpp"
#include "regada/video_encoder.hpp"

namespace regada {

// Full training configuration. JSON schema version 1; unknown keys are
// rejected so typos fail loudly instead of silently using defaults.
struct TrainConfig {
  std::uint64_t seed = 0;
  TextEncoderConfig text;
  VideoEncoderConfig video;
  LossConfig loss;
  AdamConfig optim;
  std::size_t batch_size = 512;
  std::size_t epochs = 2000;
  std::size_t eval_every = 10;

  void validate() const;
  nlohmann::ordered_json to_json() const;  // all fields, defaults materialized
  static TrainConfig from_json(const nlohmann::json& j);

  // Sorted-key dump used for the checkpoint config hash.
  std::string canonical_dump() const;
};

TrainConfig load_train_config(const std::filesystem::path& path);

nlohmann::ordered_json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const nlohmann::json& j);
SynthConfig load_synth_config(const std::filesystem::path& path);

}  // namespace regada
