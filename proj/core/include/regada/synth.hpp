#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "regada/io/dataset.hpp"

namespace regada {

struct SynthConfig {
  std::size_t n_adverbs = 6;  // must be even: adverb 2k pairs with 2k+1
  std::size_t n_actions = 12;
  std::size_t n_train = 2000;
  std::size_t n_test = 500;
  std::size_t d_theta = 32;
  std::size_t d_x = 48;
  std::size_t t_min = 3;
  std::size_t t_max = 5;
  double noise_sigma = 0.1;
  std::size_t distractors = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

// A generated dataset with the ground truth exposed for oracle checks: a
// hidden bilinear map sends each (adverb, action) word-vector pair to a
// unit-norm d_x target. Every video carries noisy draws of its own target
// plus `distractors` segments drawn from compositions with a different
// action, so attention pooling on the action query has signal to find.
struct SynthDataset {
  io::Vocabulary vocab;
  io::EmbeddingTable table;
  std::vector<io::Sample> train;  // feature_ref empty until written
  std::vector<io::Sample> test;
  std::vector<io::FeatureSequence> train_features;
  std::vector<io::FeatureSequence> test_features;
  std::vector<std::vector<double>> targets;  // [adverb * n_actions + action]

  const std::vector<double>& target(std::size_t adverb, std::size_t action,
                                    std::size_t n_actions) const {
    return targets[adverb * n_actions + action];
  }
};

SynthDataset generate_synth(const SynthConfig& config);

// Writes vocab.json, embeddings.rgdt, features/, manifest.jsonl (all
// samples), train.jsonl, test.jsonl and split.json under out_dir.
void write_synth_dataset(SynthDataset& data, const std::filesystem::path& out_dir);

// Nearest-neighbor oracle over the hidden targets: for each test video and
// each candidate adverb, score = -min_t ||x_t - target(v', a)||; accuracy of
// choosing the ground-truth adverb against its antonym.
double nearest_neighbor_antonym_accuracy(const SynthDataset& data);

}  // namespace regada
