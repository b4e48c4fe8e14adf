#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regada/config.hpp"
#include "regada/eval.hpp"
#include "regada/io/checkpoint.hpp"
#include "regada/io/report.hpp"

namespace regada {

// Both encoders built from one seeded stream in a fixed order.
struct Model {
  TextEncoder text;
  VideoEncoder video;

  Model(const TrainConfig& config, Rng& rng);

  std::vector<Tensor> parameters();
  NamedTensors named_parameters();
};

struct TrainPaths {
  std::filesystem::path manifest;
  std::filesystem::path vocab;
  std::filesystem::path embeddings;
  std::filesystem::path split;
  std::filesystem::path out_dir;
};

struct TrainOutcome {
  io::RunReport report;
  std::filesystem::path checkpoint_path;
  std::filesystem::path report_path;
};

// Full training run: seeded shuffling, minibatch gradient steps on the
// weighted objective, periodic evaluation on the test split, checkpoints at
// every evaluation point, and a report with per-metric maxima.
TrainOutcome train(const TrainConfig& config, const TrainPaths& paths);

// Checkpoint wiring. Tensors are stored as "param.<name>", "buffer.<name>",
// "adam.m.<name>" and "adam.v.<name>"; metadata carries the full config,
// its hash, the epoch and the master RNG state.
io::CheckpointData make_checkpoint(const TrainConfig& config, Model& model,
                                   const Adam* optimizer, std::size_t epoch,
                                   const Rng& master_rng);
void restore_model(Model& model, const io::CheckpointData& checkpoint);
TrainConfig config_from_checkpoint(const io::CheckpointData& checkpoint);

// Loads a checkpoint and rebuilds the model it describes.
struct LoadedModel {
  TrainConfig config;
  std::unique_ptr<Model> model;
  std::size_t epoch = 0;
};
LoadedModel load_model(const std::filesystem::path& checkpoint_path);

// Evaluation of a frozen model over the test side of a split.
io::MetricValues evaluate_model(Model& model, const io::DatasetBundle& bundle,
                                const std::vector<io::Sample>& test);

enum class AblationAxis { text_input, losses, gate_components };
AblationAxis ablation_axis_from_name(const std::string& name);

struct AblationRow {
  nlohmann::ordered_json flags;
  TrainConfig config;
};
// The enumerated config grid for one ablation axis, derived from a base
// config: text-input modality choices, loss-term on/off masks, or the
// (residual, sigmoid, shared-weights) gate variants.
std::vector<AblationRow> ablation_grid(const TrainConfig& base, AblationAxis axis);

// Trains every row of the grid and collects the per-metric maxima.
nlohmann::ordered_json run_ablation(const TrainConfig& base, AblationAxis axis,
                                    const TrainPaths& paths);

}  // namespace regada
