#include "regada/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace regada {

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Sanity checks that tie the loaded data to the model configuration.
void validate_dataset_for_config(const TrainConfig& config,
                                 const io::DatasetBundle& bundle) {
  const io::Vocabulary& vocab = bundle.vocab;
  if (bundle.table.dim != config.text.d_theta) {
    throw ValidationError("dataset: embedding width " + std::to_string(bundle.table.dim) +
                          " does not match configured d_theta " +
                          std::to_string(config.text.d_theta));
  }
  if (config.loss.lambda_action > 0.0 && vocab.actions.size() < 2) {
    throw ConfigError(
        "action triplet loss needs at least two actions to sample negatives");
  }
  if (config.loss.lambda_adverb > 0.0) {
    if (config.loss.adverb_negative_mode == AdverbNegativeMode::antonym &&
        !vocab.has_antonyms()) {
      throw ValidationError(
          "antonym negatives requested but the vocabulary has no antonym map");
    }
    if (config.loss.adverb_negative_mode == AdverbNegativeMode::random_nonmatching &&
        vocab.adverbs.size() < 2) {
      throw ConfigError("random adverb negatives need at least two adverbs");
    }
  }
  if (config.text.main_modality == Modality::pair) {
    for (std::size_t v = 0; v < vocab.adverbs.size(); ++v) {
      for (std::size_t a = 0; a < vocab.actions.size(); ++a) {
        if (!bundle.table.pair_vecs.count({v, a})) {
          throw ValidationError("pair modality requires embeddings for every "
                                "composition; missing pair:" + vocab.adverbs[v] + "|" +
                                vocab.actions[a]);
        }
      }
    }
  }
}

}  // namespace

Model::Model(const TrainConfig& config, Rng& rng)
    : text(config.text, rng), video(config.video, rng) {}

std::vector<Tensor> Model::parameters() {
  std::vector<Tensor> params = text.parameters();
  for (Tensor& p : video.parameters()) params.push_back(p);
  return params;
}

NamedTensors Model::named_parameters() {
  NamedTensors named = text.named_parameters();
  for (auto& entry : video.named_parameters()) named.push_back(entry);
  return named;
}

io::CheckpointData make_checkpoint(const TrainConfig& config, Model& model,
                                   const Adam* optimizer, std::size_t epoch,
                                   const Rng& master_rng) {
  io::CheckpointData data;
  data.meta["schema_version"] = 1;
  data.meta["epoch"] = epoch;
  data.meta["config"] = config.to_json();
  data.meta["config_hash"] = hash_hex(io::config_hash(config.canonical_dump()));
  data.meta["rng_state"] = master_rng.serialize();
  data.meta["adam_step"] = optimizer ? optimizer->step_count() : 0;

  auto push = [&data](const std::string& name, const std::vector<std::size_t>& shape,
                      const std::vector<double>& values) {
    io::TensorRecord rec;
    rec.dtype = io::DType::f64;
    rec.shape = shape;
    rec.values = values;
    data.tensors.emplace_back(name, std::move(rec));
  };

  NamedTensors params = model.named_parameters();
  for (auto& [name, t] : params) {
    push("param." + name, t.shape(),
         std::vector<double>(t.values().begin(), t.values().end()));
  }
  for (auto& [name, buf] : model.text.buffers()) {
    push("buffer." + name, {buf->size()}, *buf);
  }
  if (optimizer) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      push("adam.m." + params[i].first, params[i].second.shape(),
           optimizer->first_moment(i));
      push("adam.v." + params[i].first, params[i].second.shape(),
           optimizer->second_moment(i));
    }
  }
  return data;
}

void restore_model(Model& model, const io::CheckpointData& checkpoint) {
  std::map<std::string, const io::TensorRecord*> by_name;
  for (const auto& [name, rec] : checkpoint.tensors) by_name[name] = &rec;

  for (auto& [name, t] : model.named_parameters()) {
    auto it = by_name.find("param." + name);
    if (it == by_name.end()) {
      throw ValidationError("checkpoint: missing tensor 'param." + name + "'");
    }
    if (it->second->shape != t.shape()) {
      throw ValidationError("checkpoint: shape mismatch for 'param." + name + "'");
    }
    auto vals = t.mutable_values();
    std::copy(it->second->values.begin(), it->second->values.end(), vals.begin());
  }
  for (auto& [name, buf] : model.text.buffers()) {
    auto it = by_name.find("buffer." + name);
    if (it == by_name.end()) {
      throw ValidationError("checkpoint: missing tensor 'buffer." + name + "'");
    }
    if (it->second->values.size() != buf->size()) {
      throw ValidationError("checkpoint: shape mismatch for 'buffer." + name + "'");
    }
    *buf = it->second->values;
  }
}

TrainConfig config_from_checkpoint(const io::CheckpointData& checkpoint) {
  TrainConfig config = TrainConfig::from_json(checkpoint.meta.at("config"));
  const std::string stored = checkpoint.meta.at("config_hash").get<std::string>();
  const std::string computed = hash_hex(io::config_hash(config.canonical_dump()));
  if (stored != computed) {
    throw ValidationError("checkpoint: config hash mismatch (stored " + stored +
                          ", recomputed " + computed + ")");
  }
  return config;
}

LoadedModel load_model(const std::filesystem::path& checkpoint_path) {
  io::CheckpointData data = io::load_checkpoint(checkpoint_path);
  LoadedModel loaded;
  loaded.config = config_from_checkpoint(data);
  Rng init_rng(loaded.config.seed);
  loaded.model = std::make_unique<Model>(loaded.config, init_rng);
  restore_model(*loaded.model, data);
  loaded.epoch = data.meta.at("epoch").get<std::size_t>();
  return loaded;
}

io::MetricValues evaluate_model(Model& model, const io::DatasetBundle& bundle,
                                const std::vector<io::Sample>& test) {
  io::FeatureStore features;
  ScoreMatrix scores =
      model_scores(model.text, model.video, test, bundle.vocab, bundle.table, features);
  return compute_metrics(test, bundle.vocab, scores);
}

TrainOutcome train(const TrainConfig& config, const TrainPaths& paths) {
  config.validate();
  io::DatasetBundle bundle =
      io::load_dataset(paths.manifest, paths.vocab, paths.embeddings);
  io::SplitFile split = io::load_split(paths.split);
  std::vector<io::Sample> train_set = io::select_samples(bundle.samples, split.train);
  std::vector<io::Sample> test_set = io::select_samples(bundle.samples, split.test);
  if (train_set.empty()) throw ValidationError("train: empty training split");
  if (test_set.empty()) throw ValidationError("train: empty test split");
  validate_dataset_for_config(config, bundle);

  std::filesystem::create_directories(paths.out_dir);

  Rng master(config.seed);
  Model model(config, master);
  Adam optimizer(model.parameters(), config.optim);
  io::FeatureStore features;

  const io::Vocabulary& vocab = bundle.vocab;
  const std::size_t n_actions = vocab.actions.size();
  const std::size_t n_adverbs = vocab.adverbs.size();

  io::RunReport report;
  report.config = config.to_json();

  TrainOutcome outcome;
  outcome.checkpoint_path = paths.out_dir / "checkpoint.rgck";
  outcome.report_path = paths.out_dir / "report.json";

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng epoch_rng = master.fork(epoch);
    epoch_rng.shuffle(order);

    io::LossBreakdown epoch_loss;
    std::size_t steps = 0;

    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(begin + config.batch_size, order.size());
      const std::size_t batch = end - begin;
      if (batch < 2) continue;  // dropped: batch norm needs two rows

      // Positive compositions plus the sampled negatives.
      std::vector<std::pair<std::size_t, std::size_t>> positive, neg_action, neg_adverb;
      positive.reserve(batch);
      for (std::size_t k = begin; k < end; ++k) {
        const io::Sample& s = train_set[order[k]];
        positive.emplace_back(s.adverb, s.action);
      }
      if (config.loss.lambda_action > 0.0) {
        for (const auto& [adverb, action] : positive) {
          std::size_t other = epoch_rng.uniform_index(n_actions - 1);
          if (other >= action) ++other;
          neg_action.emplace_back(adverb, other);
        }
      }
      if (config.loss.lambda_adverb > 0.0) {
        for (const auto& [adverb, action] : positive) {
          std::size_t negative;
          if (config.loss.adverb_negative_mode == AdverbNegativeMode::antonym) {
            negative = vocab.antonym_of(adverb);
          } else {
            negative = epoch_rng.uniform_index(n_adverbs - 1);
            if (negative >= adverb) ++negative;
          }
          neg_adverb.emplace_back(negative, action);
        }
      }

      Tape tape;
      std::vector<Tensor> video_rows;
      video_rows.reserve(batch);
      for (std::size_t k = begin; k < end; ++k) {
        const io::Sample& s = train_set[order[k]];
        const io::FeatureSequence& seq = features.get(s.feature_ref);
        if (seq.width != config.video.d_x) {
          throw ValidationError(s.feature_ref + ": feature width " +
                                std::to_string(seq.width) +
                                " does not match configured d_x " +
                                std::to_string(config.video.d_x));
        }
        Tensor feats({seq.segments, seq.width}, seq.data);
        Tensor theta_a({1, bundle.table.dim}, bundle.table.action_vecs[s.action]);
        video_rows.push_back(
            model.video.encode(feats, theta_a, Mode::train, epoch_rng));
      }
      Tensor anchor = stack_rows(video_rows);
      Tensor positive_txt =
          model.text.encode_pairs(positive, bundle.table, Mode::train, epoch_rng);
      Tensor neg_action_txt, neg_adverb_txt;
      if (!neg_action.empty()) {
        neg_action_txt =
            model.text.encode_pairs(neg_action, bundle.table, Mode::train, epoch_rng);
      }
      if (!neg_adverb.empty()) {
        neg_adverb_txt =
            model.text.encode_pairs(neg_adverb, bundle.table, Mode::train, epoch_rng);
      }

      LossTerms terms =
          total_loss(anchor, positive_txt, neg_action_txt, neg_adverb_txt, config.loss);
      if (!std::isfinite(terms.total.item())) {
        std::ostringstream os;
        os << "train: non-finite loss at epoch " << epoch << " (";
        os << "action=" << (terms.action ? terms.action->item() : 0.0);
        os << " adverb=" << (terms.adverb ? terms.adverb->item() : 0.0);
        os << " regression=" << (terms.regression ? terms.regression->item() : 0.0);
        os << ")";
        throw Error(os.str());
      }
      tape.backward(terms.total);
      optimizer.step();
      optimizer.zero_grad();

      epoch_loss.action += terms.action ? terms.action->item() : 0.0;
      epoch_loss.adverb += terms.adverb ? terms.adverb->item() : 0.0;
      epoch_loss.regression += terms.regression ? terms.regression->item() : 0.0;
      epoch_loss.total += terms.total.item();
      ++steps;
    }
    if (steps == 0) {
      throw ValidationError("train: no usable minibatch (batch_size too large?)");
    }
    epoch_loss.action /= static_cast<double>(steps);
    epoch_loss.adverb /= static_cast<double>(steps);
    epoch_loss.regression /= static_cast<double>(steps);
    epoch_loss.total /= static_cast<double>(steps);

    io::EpochEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_loss;
    if (epoch % config.eval_every == 0 || epoch == config.epochs) {
      entry.metrics = evaluate_model(model, bundle, test_set);
      io::save_checkpoint(outcome.checkpoint_path,
                          make_checkpoint(config, model, &optimizer, epoch, master));
    }
    report.epochs.push_back(std::move(entry));
  }

  io::save_report(outcome.report_path, report);
  outcome.report = std::move(report);
  return outcome;
}

AblationAxis ablation_axis_from_name(const std::string& name) {
  if (name == "text-input") return AblationAxis::text_input;
  if (name == "losses") return AblationAxis::losses;
  if (name == "gate-components") return AblationAxis::gate_components;
  throw ConfigError("unknown ablation axis '" + name +
                    "' (expected text-input, losses or gate-components)");
}

std::vector<AblationRow> ablation_grid(const TrainConfig& base, AblationAxis axis) {
  std::vector<AblationRow> rows;
  switch (axis) {
    case AblationAxis::text_input: {
      const std::pair<Modality, Modality> combos[] = {
          {Modality::action, Modality::adverb},
          {Modality::pair, Modality::adverb},
          {Modality::pair, Modality::action},
          {Modality::adverb, Modality::action},
      };
      for (const auto& [main, aux] : combos) {
        AblationRow row;
        row.config = base;
        row.config.text.main_modality = main;
        row.config.text.auxiliary_modality = aux;
        row.flags["main"] = modality_name(main);
        row.flags["auxiliary"] = modality_name(aux);
        rows.push_back(std::move(row));
      }
      break;
    }
    case AblationAxis::losses: {
      const std::array<bool, 3> masks[] = {
          {true, false, false}, {false, true, false}, {false, false, true},
          {true, true, false},  {true, true, true},
      };
      for (const auto& mask : masks) {
        AblationRow row;
        row.config = base;
        row.config.loss.lambda_action = mask[0] ? base.loss.lambda_action : 0.0;
        row.config.loss.lambda_adverb = mask[1] ? base.loss.lambda_adverb : 0.0;
        row.config.loss.lambda_reg = mask[2] ? base.loss.lambda_reg : 0.0;
        row.flags["action_triplet"] = mask[0];
        row.flags["adverb_triplet"] = mask[1];
        row.flags["regression"] = mask[2];
        rows.push_back(std::move(row));
      }
      break;
    }
    case AblationAxis::gate_components: {
      const std::array<bool, 3> combos[] = {
          {true, true, true},   // residual, sigmoid, shared weights
          {true, false, false},
          {false, true, false},
          {true, true, false},  // the default model
      };
      for (const auto& c : combos) {
        AblationRow row;
        row.config = base;
        row.config.text.use_residual = c[0];
        row.config.text.use_sigmoid = c[1];
        row.config.text.share_gate_res_weights = c[2];
        row.flags["residual"] = c[0];
        row.flags["sigmoid"] = c[1];
        row.flags["shared_weights"] = c[2];
        rows.push_back(std::move(row));
      }
      break;
    }
  }
  return rows;
}

nlohmann::ordered_json run_ablation(const TrainConfig& base, AblationAxis axis,
                                    const TrainPaths& paths) {
  nlohmann::ordered_json out;
  out["axis"] = axis == AblationAxis::text_input     ? "text-input"
                : axis == AblationAxis::losses       ? "losses"
                                                     : "gate-components";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::size_t index = 0;
  for (AblationRow& row : ablation_grid(base, axis)) {
    TrainPaths row_paths = paths;
    row_paths.out_dir = paths.out_dir / ("row" + std::to_string(index));
    TrainOutcome outcome = train(row.config, row_paths);
    nlohmann::ordered_json jrow;
    jrow["flags"] = row.flags;
    jrow["best"] = io::report_to_json(outcome.report).at("best");
    rows.push_back(std::move(jrow));
    ++index;
  }
  out["rows"] = rows;
  return out;
}

}  // namespace regada
