#include "regada/config.hpp"

#include <fstream>
#include <set>

namespace regada {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Pulls a field if present, enforcing that every present key is known.
// Holds its own copy so callers may pass temporaries.
class Section {
 public:
  Section(json j, std::string name) : j_(std::move(j)), name_(std::move(name)) {}

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (j_.contains(key)) {
      try {
        out = j_.at(key).get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(name_ + "." + key + ": " + e.what());
      }
    }
  }

  void get_string(const char* key, std::string& out) { get<std::string>(key, out); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) {
        throw ConfigError(name_ + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  json j_;
  std::string name_;
  std::set<std::string> known_;
};

json section_or_empty(const json& j, const char* key) {
  return j.contains(key) ? j.at(key) : json::object();
}

}  // namespace

void TrainConfig::validate() const {
  text.validate();
  video.validate();
  loss.validate();
  if (text.d_dim != video.d_dim) {
    throw ConfigError("config: text.d_dim (" + std::to_string(text.d_dim) +
                      ") and video.d_dim (" + std::to_string(video.d_dim) +
                      ") must agree");
  }
  if (text.d_theta != video.d_theta) {
    throw ConfigError("config: text.d_theta and video.d_theta must agree");
  }
  if (batch_size < 2) {
    throw ConfigError("config: batch_size must be >= 2 (batch norm needs two rows)");
  }
  if (epochs < 1) throw ConfigError("config: epochs must be >= 1");
  if (eval_every < 1) throw ConfigError("config: eval_every must be >= 1");
  if (optim.lr <= 0.0) throw ConfigError("config: learning rate must be positive");
}

ordered_json TrainConfig::to_json() const {
  ordered_json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  ordered_json t;
  t["d_theta"] = text.d_theta;
  t["d_dim"] = text.d_dim;
  t["gate_layers"] = text.gate_layers;
  t["res_layers"] = text.res_layers;
  t["dropout"] = text.dropout;
  t["use_residual"] = text.use_residual;
  t["use_sigmoid"] = text.use_sigmoid;
  t["share_gate_res_weights"] = text.share_gate_res_weights;
  t["main_modality"] = modality_name(text.main_modality);
  t["auxiliary_modality"] = modality_name(text.auxiliary_modality);
  j["text"] = t;
  ordered_json v;
  v["d_x"] = video.d_x;
  v["d_theta"] = video.d_theta;
  v["d_dim"] = video.d_dim;
  v["heads"] = video.heads;
  v["d_head"] = video.d_head;
  v["attn_dropout"] = video.attn_dropout;
  v["proj_layers"] = video.proj_layers;
  v["proj_dropout"] = video.proj_dropout;
  j["video"] = v;
  ordered_json l;
  l["lambda_action"] = loss.lambda_action;
  l["lambda_adverb"] = loss.lambda_adverb;
  l["lambda_reg"] = loss.lambda_reg;
  l["margin"] = loss.margin;
  l["adverb_negatives"] = adverb_negative_mode_name(loss.adverb_negative_mode);
  j["loss"] = l;
  ordered_json o;
  o["lr"] = optim.lr;
  o["beta1"] = optim.beta1;
  o["beta2"] = optim.beta2;
  o["eps"] = optim.eps;
  o["weight_decay"] = optim.weight_decay;
  o["decoupled_weight_decay"] = optim.decoupled_weight_decay;
  j["optim"] = o;
  ordered_json tr;
  tr["batch_size"] = batch_size;
  tr["epochs"] = epochs;
  tr["eval_every"] = eval_every;
  j["train"] = tr;
  return j;
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig cfg;
  Section root(j, "config");
  int schema_version = 1;
  root.get("schema_version", schema_version);
  if (schema_version != 1) {
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(schema_version));
  }
  root.get("seed", cfg.seed);
  json dummy;
  root.get("text", dummy);
  root.get("video", dummy);
  root.get("loss", dummy);
  root.get("optim", dummy);
  root.get("train", dummy);
  root.finish();

  {
    Section s(section_or_empty(j, "text"), "text");
    s.get("d_theta", cfg.text.d_theta);
    s.get("d_dim", cfg.text.d_dim);
    s.get("gate_layers", cfg.text.gate_layers);
    s.get("res_layers", cfg.text.res_layers);
    s.get("dropout", cfg.text.dropout);
    s.get("use_residual", cfg.text.use_residual);
    s.get("use_sigmoid", cfg.text.use_sigmoid);
    s.get("share_gate_res_weights", cfg.text.share_gate_res_weights);
    std::string main = modality_name(cfg.text.main_modality);
    std::string aux = modality_name(cfg.text.auxiliary_modality);
    s.get_string("main_modality", main);
    s.get_string("auxiliary_modality", aux);
    cfg.text.main_modality = modality_from_name(main);
    cfg.text.auxiliary_modality = modality_from_name(aux);
    s.finish();
  }
  {
    Section s(section_or_empty(j, "video"), "video");
    s.get("d_x", cfg.video.d_x);
    s.get("d_theta", cfg.video.d_theta);
    s.get("d_dim", cfg.video.d_dim);
    s.get("heads", cfg.video.heads);
    s.get("d_head", cfg.video.d_head);
    s.get("attn_dropout", cfg.video.attn_dropout);
    s.get("proj_layers", cfg.video.proj_layers);
    s.get("proj_dropout", cfg.video.proj_dropout);
    s.finish();
  }
  {
    Section s(section_or_empty(j, "loss"), "loss");
    s.get("lambda_action", cfg.loss.lambda_action);
    s.get("lambda_adverb", cfg.loss.lambda_adverb);
    s.get("lambda_reg", cfg.loss.lambda_reg);
    s.get("margin", cfg.loss.margin);
    std::string mode = adverb_negative_mode_name(cfg.loss.adverb_negative_mode);
    s.get_string("adverb_negatives", mode);
    cfg.loss.adverb_negative_mode = adverb_negative_mode_from_name(mode);
    s.finish();
  }
  {
    Section s(section_or_empty(j, "optim"), "optim");
    s.get("lr", cfg.optim.lr);
    s.get("beta1", cfg.optim.beta1);
    s.get("beta2", cfg.optim.beta2);
    s.get("eps", cfg.optim.eps);
    s.get("weight_decay", cfg.optim.weight_decay);
    s.get("decoupled_weight_decay", cfg.optim.decoupled_weight_decay);
    s.finish();
  }
  {
    Section s(section_or_empty(j, "train"), "train");
    s.get("batch_size", cfg.batch_size);
    s.get("epochs", cfg.epochs);
    s.get("eval_every", cfg.eval_every);
    s.finish();
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return TrainConfig::from_json(j);
}

std::string TrainConfig::canonical_dump() const {
  // nlohmann::json (non-ordered) sorts keys lexicographically.
  return json(to_json()).dump();
}

ordered_json synth_config_to_json(const SynthConfig& config) {
  ordered_json j;
  j["schema_version"] = 1;
  j["n_adverbs"] = config.n_adverbs;
  j["n_actions"] = config.n_actions;
  j["n_train"] = config.n_train;
  j["n_test"] = config.n_test;
  j["d_theta"] = config.d_theta;
  j["d_x"] = config.d_x;
  j["t_min"] = config.t_min;
  j["t_max"] = config.t_max;
  j["noise_sigma"] = config.noise_sigma;
  j["distractors"] = config.distractors;
  j["seed"] = config.seed;
  return j;
}

SynthConfig synth_config_from_json(const json& j) {
  SynthConfig cfg;
  Section s(j, "synth");
  int schema_version = 1;
  s.get("schema_version", schema_version);
  s.get("n_adverbs", cfg.n_adverbs);
  s.get("n_actions", cfg.n_actions);
  s.get("n_train", cfg.n_train);
  s.get("n_test", cfg.n_test);
  s.get("d_theta", cfg.d_theta);
  s.get("d_x", cfg.d_x);
  s.get("t_min", cfg.t_min);
  s.get("t_max", cfg.t_max);
  s.get("noise_sigma", cfg.noise_sigma);
  s.get("distractors", cfg.distractors);
  s.get("seed", cfg.seed);
  s.finish();
  cfg.validate();
  return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return synth_config_from_json(j);
}

}  // namespace regada
