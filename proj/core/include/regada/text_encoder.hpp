#pragma once

#include <string>
#include <utility>
#include <vector>

#include "regada/io/dataset.hpp"
#include "regada/nn.hpp"

namespace regada {

// Which word vector feeds each side of the composition. The main modality
// is the one the gate preserves; the auxiliary only conditions the gate and
// residual. `pair` uses the jointly-embedded adverb-action vector and is
// only valid as the main modality.
enum class Modality { adverb, action, pair };

std::string modality_name(Modality m);
Modality modality_from_name(const std::string& name);

struct TextEncoderConfig {
  std::size_t d_theta = 512;
  std::size_t d_dim = 400;
  std::size_t gate_layers = 2;  // N_g hidden blocks
  std::size_t res_layers = 2;   // N_r hidden blocks
  double dropout = 0.6;         // drop_g
  bool use_residual = true;
  bool use_sigmoid = true;
  bool share_gate_res_weights = false;
  Modality main_modality = Modality::adverb;
  Modality auxiliary_modality = Modality::action;

  void validate() const;
};

// Composition MLP: batch norm over the concatenated input, N blocks of
// linear -> dropout -> LeakyReLU at the input width, then a linear
// projection down to d_dim.
struct CompositionMlp {
  BatchNorm input_norm;
  std::vector<Linear> blocks;
  Linear out;

  CompositionMlp() = default;
  CompositionMlp(std::size_t in_dim, std::size_t out_dim, std::size_t n_blocks, Rng& rng);

  Tensor forward(const Tensor& z, double dropout_p, Mode mode, Rng& rng);
};

// Residually gated composition of two projected word embeddings:
//   o = w_g * sigma(gate(z)) (*) phi_main + w_r * res(z),  z = [phi_aux, phi_main]
// with sigma dropped when use_sigmoid is off, the second term dropped when
// use_residual is off, and res == gate when weights are shared.
class TextEncoder {
 public:
  TextEncoder(TextEncoderConfig config, Rng& rng);

  const TextEncoderConfig& config() const { return config_; }

  // Bias-free linear projections of raw word vectors into d_dim.
  Tensor project_main(const Tensor& theta) const { return main_proj_(theta); }
  Tensor project_aux(const Tensor& theta) const { return aux_proj_(theta); }

  Tensor compose(const Tensor& phi_main, const Tensor& phi_aux, Mode mode, Rng& rng);

  // Full path from word vectors for a batch of (adverb, action) index pairs.
  Tensor encode_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                      const io::EmbeddingTable& table, Mode mode, Rng& rng);

  // [V, d_dim] matrix whose row j composes adverb j with the given action.
  // Eval mode only; deterministic.
  Tensor embed_all_adverbs(std::size_t action, const io::Vocabulary& vocab,
                           const io::EmbeddingTable& table);

  Tensor& omega_gate() { return omega_gate_; }
  Tensor& omega_res() { return omega_res_; }

  std::vector<Tensor> parameters();
  NamedTensors named_parameters();  // "text.*"
  // Batch-norm running statistics, mutable for checkpoint restore.
  std::vector<std::pair<std::string, std::vector<double>*>> buffers();

  // Builds the [B, d_theta] leaf for one side of the composition.
  Tensor gather_words(Modality modality,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                      const io::EmbeddingTable& table) const;

 private:
  TextEncoderConfig config_;
  Linear main_proj_;
  Linear aux_proj_;
  CompositionMlp gate_;
  CompositionMlp res_;  // unused when shared or residual off
  Tensor omega_gate_;
  Tensor omega_res_;  // only defined when use_residual
};

}  // namespace regada
