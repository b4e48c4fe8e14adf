#include "regada/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "regada/rng.hpp"

namespace regada {

namespace {

std::string pad_index(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
  return buf;
}

std::vector<double> random_unit_vector(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_adverbs == 0 || n_adverbs % 2 != 0) {
    throw ConfigError("synth: n_adverbs must be positive and even");
  }
  if (n_actions == 0 || n_train == 0 || n_test == 0 || d_theta == 0 || d_x == 0) {
    throw ConfigError("synth: counts and dimensions must be positive");
  }
  if (t_min < 1 || t_max < t_min) {
    throw ConfigError("synth: segment range requires 1 <= t_min <= t_max");
  }
  if (noise_sigma < 0.0) throw ConfigError("synth: noise_sigma must be >= 0");
  if (n_actions < 2 && distractors > 0) {
    throw ConfigError("synth: distractors need at least two actions to draw from");
  }
}

SynthDataset generate_synth(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthDataset data;

  // Vocabulary with adverb 2k <-> 2k+1 antonym pairing.
  for (std::size_t v = 0; v < config.n_adverbs; ++v) {
    data.vocab.adverbs.push_back(pad_index("adv", v));
  }
  for (std::size_t a = 0; a < config.n_actions; ++a) {
    data.vocab.actions.push_back(pad_index("act", a));
  }
  data.vocab.antonym.resize(config.n_adverbs);
  for (std::size_t v = 0; v < config.n_adverbs; v += 2) {
    data.vocab.antonym[v] = v + 1;
    data.vocab.antonym[v + 1] = v;
  }

  // Word vectors: random unit vectors (adverbs, actions, then pairs).
  data.table.dim = config.d_theta;
  for (std::size_t v = 0; v < config.n_adverbs; ++v) {
    data.table.adverb_vecs.push_back(random_unit_vector(config.d_theta, rng));
  }
  for (std::size_t a = 0; a < config.n_actions; ++a) {
    data.table.action_vecs.push_back(random_unit_vector(config.d_theta, rng));
  }
  for (std::size_t v = 0; v < config.n_adverbs; ++v) {
    for (std::size_t a = 0; a < config.n_actions; ++a) {
      data.table.pair_vecs[{v, a}] = random_unit_vector(config.d_theta, rng);
    }
  }

  // Hidden bilinear map: target(v, a)[k] = theta_v^T B_k theta_a, scaled to
  // unit norm per composition.
  const std::size_t dt = config.d_theta;
  std::vector<double> bilinear(config.d_x * dt * dt);
  const double b_scale = 1.0 / static_cast<double>(dt);
  for (double& x : bilinear) x = rng.normal() * b_scale;
  data.targets.resize(config.n_adverbs * config.n_actions);
  for (std::size_t v = 0; v < config.n_adverbs; ++v) {
    for (std::size_t a = 0; a < config.n_actions; ++a) {
      const std::vector<double>& tv = data.table.adverb_vecs[v];
      const std::vector<double>& ta = data.table.action_vecs[a];
      std::vector<double> target(config.d_x, 0.0);
      double norm = 0.0;
      for (std::size_t k = 0; k < config.d_x; ++k) {
        const double* bk = bilinear.data() + k * dt * dt;
        double acc = 0.0;
        for (std::size_t i = 0; i < dt; ++i) {
          const double tvi = tv[i];
          const double* row = bk + i * dt;
          for (std::size_t j = 0; j < dt; ++j) acc += tvi * row[j] * ta[j];
        }
        target[k] = acc;
        norm += acc * acc;
      }
      norm = std::sqrt(norm);
      for (double& x : target) x /= norm;
      data.targets[v * config.n_actions + a] = std::move(target);
    }
  }

  // Composition assignment: a round-robin prefix guarantees coverage of
  // every composition (when the count allows), the rest is uniform.
  const std::size_t n_comps = config.n_adverbs * config.n_actions;
  auto assign_compositions = [&](std::size_t n) {
    std::vector<std::size_t> comp(n);
    for (std::size_t i = 0; i < n; ++i) {
      comp[i] = i < n_comps ? i : rng.uniform_index(n_comps);
    }
    rng.shuffle(comp);
    return comp;
  };

  auto make_video = [&](std::size_t comp_id) {
    const std::size_t adverb = comp_id / config.n_actions;
    const std::size_t action = comp_id % config.n_actions;
    const std::size_t t =
        config.t_min + rng.uniform_index(config.t_max - config.t_min + 1);
    const std::size_t n_distractors = std::min(config.distractors, t - 1);

    io::FeatureSequence seq;
    seq.segments = t;
    seq.width = config.d_x;
    seq.data.resize(t * config.d_x);
    // One signal segment, the configured number of distractors from
    // other-action compositions, and zero-mean noise padding for the rest;
    // segment order is shuffled afterwards. nullptr marks a padding source.
    std::vector<const std::vector<double>*> sources;
    sources.push_back(&data.targets[comp_id]);
    for (std::size_t d = 0; d < n_distractors; ++d) {
      std::size_t other_action = rng.uniform_index(config.n_actions - 1);
      if (other_action >= action) ++other_action;
      const std::size_t other_adverb = rng.uniform_index(config.n_adverbs);
      sources.push_back(&data.targets[other_adverb * config.n_actions + other_action]);
    }
    while (sources.size() < t) sources.push_back(nullptr);
    rng.shuffle(sources);
    for (std::size_t s = 0; s < t; ++s) {
      for (std::size_t k = 0; k < config.d_x; ++k) {
        const double base = sources[s] ? (*sources[s])[k] : 0.0;
        seq.data[s * config.d_x + k] =
            base + (config.noise_sigma > 0.0 ? config.noise_sigma * rng.normal() : 0.0);
      }
    }
    return std::make_pair(std::make_pair(adverb, action), std::move(seq));
  };

  const std::vector<std::size_t> train_comps = assign_compositions(config.n_train);
  for (std::size_t i = 0; i < config.n_train; ++i) {
    auto [labels, seq] = make_video(train_comps[i]);
    io::Sample s;
    s.video_id = pad_index("train_", i);
    s.adverb = labels.first;
    s.action = labels.second;
    data.train.push_back(std::move(s));
    data.train_features.push_back(std::move(seq));
  }
  const std::vector<std::size_t> test_comps = assign_compositions(config.n_test);
  for (std::size_t i = 0; i < config.n_test; ++i) {
    auto [labels, seq] = make_video(test_comps[i]);
    io::Sample s;
    s.video_id = pad_index("test_", i);
    s.adverb = labels.first;
    s.action = labels.second;
    data.test.push_back(std::move(s));
    data.test_features.push_back(std::move(seq));
  }
  return data;
}

void write_synth_dataset(SynthDataset& data, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "features");

  auto write_part = [&](std::vector<io::Sample>& samples,
                        const std::vector<io::FeatureSequence>& features) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const fs::path path = out_dir / "features" / (samples[i].video_id + ".rgdf");
      io::write_feature_file(path, features[i]);
      samples[i].feature_ref = path.string();
    }
  };
  write_part(data.train, data.train_features);
  write_part(data.test, data.test_features);

  io::save_vocabulary(out_dir / "vocab.json", data.vocab);
  io::save_embeddings(out_dir / "embeddings.rgdt", data.vocab, data.table);
  io::save_manifest(out_dir / "train.jsonl", data.vocab, data.train, out_dir);
  io::save_manifest(out_dir / "test.jsonl", data.vocab, data.test, out_dir);

  std::vector<io::Sample> all = data.train;
  all.insert(all.end(), data.test.begin(), data.test.end());
  io::save_manifest(out_dir / "manifest.jsonl", data.vocab, all, out_dir);

  io::SplitFile split;
  for (const io::Sample& s : data.train) split.train.push_back(s.video_id);
  for (const io::Sample& s : data.test) split.test.push_back(s.video_id);
  io::save_split(out_dir / "split.json", split);
}

double nearest_neighbor_antonym_accuracy(const SynthDataset& data) {
  const std::size_t n_actions = data.vocab.actions.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    const io::Sample& s = data.test[i];
    const io::FeatureSequence& seq = data.test_features[i];
    auto min_distance = [&](std::size_t adverb) {
      const std::vector<double>& target = data.targets[adverb * n_actions + s.action];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < seq.segments; ++t) {
        const double* row = seq.row(t);
        double d2 = 0.0;
        for (std::size_t k = 0; k < seq.width; ++k) {
          d2 += (row[k] - target[k]) * (row[k] - target[k]);
        }
        best = std::min(best, d2);
      }
      return best;
    };
    if (min_distance(s.adverb) < min_distance(data.vocab.antonym_of(s.adverb))) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.test.size());
}

}  // namespace regada
