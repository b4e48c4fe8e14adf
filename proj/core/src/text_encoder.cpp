#include "regada/text_encoder.hpp"

namespace regada {

std::string modality_name(Modality m) {
  switch (m) {
    case Modality::adverb: return "adverb";
    case Modality::action: return "action";
    case Modality::pair: return "pair";
  }
  throw ConfigError("unknown modality");
}

Modality modality_from_name(const std::string& name) {
  if (name == "adverb") return Modality::adverb;
  if (name == "action") return Modality::action;
  if (name == "pair") return Modality::pair;
  throw ConfigError("unknown modality '" + name + "'");
}

void TextEncoderConfig::validate() const {
  if (d_theta == 0 || d_dim == 0) throw ConfigError("text: d_theta and d_dim must be positive");
  if (gate_layers < 1 || res_layers < 1) {
    throw ConfigError("text: gate_layers and res_layers must be >= 1");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw ConfigError("text: dropout must lie in [0,1)");
  }
  if (auxiliary_modality == Modality::pair) {
    throw ConfigError("text: the auxiliary modality cannot be 'pair'");
  }
  if (main_modality != Modality::pair && main_modality == auxiliary_modality) {
    throw ConfigError("text: main and auxiliary modalities must differ");
  }
  if (share_gate_res_weights && gate_layers != res_layers) {
    throw ConfigError("text: shared gate/residual weights require gate_layers == res_layers");
  }
}

CompositionMlp::CompositionMlp(std::size_t in_dim, std::size_t out_dim,
                               std::size_t n_blocks, Rng& rng)
    : input_norm(in_dim), out() {
  for (std::size_t i = 0; i < n_blocks; ++i) {
    blocks.emplace_back(in_dim, in_dim, /*with_bias=*/true, rng);
  }
  out = Linear(in_dim, out_dim, /*with_bias=*/true, rng);
}

Tensor CompositionMlp::forward(const Tensor& z, double dropout_p, Mode mode, Rng& rng) {
  Tensor h = batch_norm(z, input_norm, mode);
  for (const Linear& block : blocks) {
    h = leaky_relu(dropout(block(h), dropout_p, mode, rng), 0.01);
  }
  return out(h);
}

TextEncoder::TextEncoder(TextEncoderConfig config, Rng& rng) : config_(config) {
  config_.validate();
  main_proj_ = Linear(config_.d_theta, config_.d_dim, /*with_bias=*/false, rng);
  aux_proj_ = Linear(config_.d_theta, config_.d_dim, /*with_bias=*/false, rng);
  gate_ = CompositionMlp(2 * config_.d_dim, config_.d_dim, config_.gate_layers, rng);
  if (config_.use_residual && !config_.share_gate_res_weights) {
    res_ = CompositionMlp(2 * config_.d_dim, config_.d_dim, config_.res_layers, rng);
  }
  // Both branches start active.
  omega_gate_ = Tensor::scalar(1.0, true);
  if (config_.use_residual) omega_res_ = Tensor::scalar(1.0, true);
}

Tensor TextEncoder::compose(const Tensor& phi_main, const Tensor& phi_aux, Mode mode,
                            Rng& rng) {
  if (phi_main.rank() != 2 || phi_aux.rank() != 2 ||
      phi_main.shape() != phi_aux.shape() || phi_main.shape()[1] != config_.d_dim) {
    throw ShapeError("compose: expected matching [B," + std::to_string(config_.d_dim) +
                     "] inputs, got " + shape_string(phi_main.shape()) + " and " +
                     shape_string(phi_aux.shape()));
  }
  // Concatenation order is fixed: auxiliary side first, main side second.
  Tensor z = concat_cols(phi_aux, phi_main);
  Tensor gate = gate_.forward(z, config_.dropout, mode, rng);
  if (config_.use_sigmoid) gate = sigmoid(gate);
  Tensor out = scalar_mul(omega_gate_, mul(gate, phi_main));
  if (config_.use_residual) {
    CompositionMlp& res = config_.share_gate_res_weights ? gate_ : res_;
    out = add(out, scalar_mul(omega_res_, res.forward(z, config_.dropout, mode, rng)));
  }
  return out;
}

Tensor TextEncoder::gather_words(Modality modality,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                 const io::EmbeddingTable& table) const {
  std::vector<double> buf;
  buf.reserve(pairs.size() * table.dim);
  for (const auto& [adverb, action] : pairs) {
    const std::vector<double>* vec = nullptr;
    switch (modality) {
      case Modality::adverb: vec = &table.adverb_vecs.at(adverb); break;
      case Modality::action: vec = &table.action_vecs.at(action); break;
      case Modality::pair: vec = &table.pair_vec(adverb, action); break;
    }
    buf.insert(buf.end(), vec->begin(), vec->end());
  }
  return Tensor({pairs.size(), table.dim}, std::move(buf));
}

Tensor TextEncoder::encode_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                 const io::EmbeddingTable& table, Mode mode, Rng& rng) {
  if (pairs.empty()) throw ShapeError("encode_pairs: empty batch");
  if (table.dim != config_.d_theta) {
    throw ShapeError("encode_pairs: embedding width " + std::to_string(table.dim) +
                     " does not match d_theta " + std::to_string(config_.d_theta));
  }
  Tensor theta_main = gather_words(config_.main_modality, pairs, table);
  Tensor theta_aux = gather_words(config_.auxiliary_modality, pairs, table);
  return compose(project_main(theta_main), project_aux(theta_aux), mode, rng);
}

Tensor TextEncoder::embed_all_adverbs(std::size_t action, const io::Vocabulary& vocab,
                                      const io::EmbeddingTable& table) {
  if (action >= vocab.actions.size()) {
    throw ValidationError("embed_all_adverbs: action index " + std::to_string(action) +
                          " out of range");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(vocab.adverbs.size());
  for (std::size_t v = 0; v < vocab.adverbs.size(); ++v) pairs.emplace_back(v, action);
  Rng unused(0);  // eval mode draws nothing
  return encode_pairs(pairs, table, Mode::eval, unused);
}

std::vector<Tensor> TextEncoder::parameters() {
  std::vector<Tensor> params;
  for (auto& [name, t] : named_parameters()) params.push_back(t);
  return params;
}

NamedTensors TextEncoder::named_parameters() {
  NamedTensors out;
  out.emplace_back("text.main_proj.W", main_proj_.weight);
  out.emplace_back("text.aux_proj.W", aux_proj_.weight);
  auto add_mlp = [&out](const std::string& prefix, CompositionMlp& mlp) {
    out.emplace_back(prefix + ".bn.gamma", mlp.input_norm.gamma);
    out.emplace_back(prefix + ".bn.beta", mlp.input_norm.beta);
    for (std::size_t i = 0; i < mlp.blocks.size(); ++i) {
      out.emplace_back(prefix + ".block" + std::to_string(i) + ".W", mlp.blocks[i].weight);
      out.emplace_back(prefix + ".block" + std::to_string(i) + ".b", mlp.blocks[i].bias);
    }
    out.emplace_back(prefix + ".out.W", mlp.out.weight);
    out.emplace_back(prefix + ".out.b", mlp.out.bias);
  };
  add_mlp("text.gate", gate_);
  if (config_.use_residual && !config_.share_gate_res_weights) add_mlp("text.res", res_);
  out.emplace_back("text.omega_g", omega_gate_);
  if (config_.use_residual) out.emplace_back("text.omega_r", omega_res_);
  return out;
}

std::vector<std::pair<std::string, std::vector<double>*>> TextEncoder::buffers() {
  std::vector<std::pair<std::string, std::vector<double>*>> out;
  auto add_bn = [&out](const std::string& prefix, BatchNorm& bn) {
    out.emplace_back(prefix + ".bn.running_mean", &bn.running_mean);
    out.emplace_back(prefix + ".bn.running_var", &bn.running_var);
  };
  add_bn("text.gate", gate_.input_norm);
  if (config_.use_residual && !config_.share_gate_res_weights) {
    add_bn("text.res", res_.input_norm);
  }
  return out;
}

}  // namespace regada
