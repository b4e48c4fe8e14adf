#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regada/errors.hpp"
#include "regada/io/tensor_file.hpp"

namespace regada::io {

// Adverb/action label sets plus an optional antonym map. When present the
// map is a total, fixed-point-free involution over the adverbs.
struct Vocabulary {
  std::vector<std::string> adverbs;
  std::vector<std::string> actions;
  std::vector<std::size_t> antonym;  // antonym[i] = partner index; empty if absent

  bool has_antonyms() const { return !antonym.empty(); }
  std::size_t adverb_index(const std::string& label) const;
  std::size_t action_index(const std::string& label) const;
  std::size_t antonym_of(std::size_t adverb_idx) const;
};

// One annotated video: labels as vocabulary indices, features by path.
struct Sample {
  std::string video_id;
  std::size_t action = 0;
  std::size_t adverb = 0;
  std::string feature_ref;  // resolved path to the RGDF feature file
};

// T x d_x matrix of visual features for one video.
struct FeatureSequence {
  std::size_t segments = 0;  // T
  std::size_t width = 0;     // d_x
  std::vector<double> data;  // row-major

  const double* row(std::size_t t) const { return data.data() + t * width; }
};

// Word vectors for adverbs and actions (vocabulary order) plus optional
// per-pair vectors keyed by (adverb index, action index).
struct EmbeddingTable {
  std::size_t dim = 0;  // d_theta
  std::vector<std::vector<double>> adverb_vecs;
  std::vector<std::vector<double>> action_vecs;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> pair_vecs;

  bool has_pairs() const { return !pair_vecs.empty(); }
  const std::vector<double>& pair_vec(std::size_t adverb, std::size_t action) const;
};

// Disjoint video-id partitions.
struct SplitFile {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<std::string> unlabelled;
};

struct DatasetBundle {
  Vocabulary vocab;
  EmbeddingTable table;
  std::vector<Sample> samples;
};

// --- feature files ---------------------------------------------------------

void write_feature_file(const std::filesystem::path& path, const FeatureSequence& seq);
FeatureSequence read_feature_file(const std::filesystem::path& path);

// Read-through cache over feature files. The first file fixes d_x; any
// later width disagreement is a ValidationError naming the file.
class FeatureStore {
 public:
  const FeatureSequence& get(const std::string& path);
  std::size_t width() const { return width_; }

 private:
  std::map<std::string, FeatureSequence> cache_;
  std::size_t width_ = 0;
};

// --- JSON formats -----------------------------------------------------------

// Vocabulary file: one JSON object
//   {"adverbs": [...], "actions": [...], "antonyms": {"slowly": "quickly"}}
// Antonym pairs may be given one-directional; the loader completes the
// involution and validates totality / absence of fixed points.
Vocabulary load_vocabulary(const std::filesystem::path& path);
void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab);

// Embedding file: RGDT dictionary with one rank-1 entry per label, named
// "adverb:<label>", "action:<label>" and optionally "pair:<adverb>|<action>".
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab);
void save_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                     const EmbeddingTable& table);

// Manifest: JSON lines {"video_id","feature","action","adverb"}; feature
// paths are resolved relative to the manifest's directory.
std::vector<Sample> load_manifest(const std::filesystem::path& path,
                                  const Vocabulary& vocab);
void save_manifest(const std::filesystem::path& path, const Vocabulary& vocab,
                   const std::vector<Sample>& samples,
                   const std::filesystem::path& feature_base);

SplitFile load_split(const std::filesystem::path& path);
void save_split(const std::filesystem::path& path, const SplitFile& split);

// Loads and cross-validates the three core inputs.
DatasetBundle load_dataset(const std::filesystem::path& manifest_path,
                           const std::filesystem::path& vocab_path,
                           const std::filesystem::path& embeddings_path);

// Applies a split to a sample list; every referenced id must exist.
std::vector<Sample> select_samples(const std::vector<Sample>& all,
                                   const std::vector<std::string>& ids);

}  // namespace regada::io
