#pragma once

#include <string>
#include <utility>
#include <vector>

#include "regada/ops.hpp"

namespace regada {

// Fan-in-scaled uniform init: entries drawn from U(-b, b) with b = sqrt(1/fan_in).
Tensor init_weight(std::size_t fan_in, std::size_t fan_out, Rng& rng);

// y = x W (+ b). Weight stored [in, out]; bias optional.
struct Linear {
  Tensor weight;
  Tensor bias;  // undefined when the layer is bias-free

  Linear() = default;
  Linear(std::size_t in, std::size_t out, bool with_bias, Rng& rng);

  Tensor operator()(const Tensor& x) const;
};

// Batch normalization over the batch dimension of a [B, d] tensor.
// Train mode normalizes with biased batch statistics and folds them into the
// running estimates with momentum 0.1; eval mode normalizes with the running
// estimates. Train mode requires B >= 2.
struct BatchNorm {
  Tensor gamma;
  Tensor beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.1;
  double eps = 1e-5;

  BatchNorm() = default;
  explicit BatchNorm(std::size_t dim);

  std::size_t dim() const { return running_mean.size(); }
};

Tensor batch_norm(const Tensor& x, BatchNorm& state, Mode mode);

// Per-feature affine pair for layer normalization.
struct LayerNormAffine {
  Tensor gamma;
  Tensor beta;

  LayerNormAffine() = default;
  explicit LayerNormAffine(std::size_t dim);
};

// (name, tensor) pairs used for checkpointing and the parameter list fed to
// the optimizer. Buffers are non-trained state (running statistics).
using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

}  // namespace regada
