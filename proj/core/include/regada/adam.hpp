#pragma once

#include <cstdint>
#include <vector>

#include "regada/tensor.hpp"

namespace regada {

struct AdamConfig {
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-5;
  // false: classic L2 coupling, decay added to the gradient before the
  // moment updates. true: decoupled, applied directly to the parameters.
  bool decoupled_weight_decay = false;
};

// Bias-corrected Adam over a fixed parameter list. Parameters with no grad
// buffer are treated as zero-gradient (weight decay still applies).
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig config);

  void step();
  void zero_grad();

  std::int64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }
  std::size_t param_count() const { return params_.size(); }

  // Moment access for checkpointing.
  const std::vector<double>& first_moment(std::size_t i) const { return m_[i]; }
  const std::vector<double>& second_moment(std::size_t i) const { return v_[i]; }
  void restore(std::int64_t step_count, std::vector<std::vector<double>> m,
               std::vector<std::vector<double>> v);

 private:
  std::vector<Tensor> params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t step_count_ = 0;
};

}  // namespace regada
