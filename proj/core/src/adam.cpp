#include "regada/adam.hpp"

#include <cmath>

#include "regada/errors.hpp"

namespace regada {

Adam::Adam(std::vector<Tensor> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  if (config_.lr <= 0.0) throw ConfigError("adam: learning rate must be positive");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Tensor& p : params_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Adam::step() {
  ++step_count_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = params_[i];
    auto vals = p.mutable_values();
    const bool has_grad = p.has_grad();
    auto grads = has_grad ? p.grad() : std::span<const double>();
    for (std::size_t j = 0; j < vals.size(); ++j) {
      double g = has_grad ? grads[j] : 0.0;
      if (!config_.decoupled_weight_decay) g += config_.weight_decay * vals[j];
      m_[i][j] = config_.beta1 * m_[i][j] + (1.0 - config_.beta1) * g;
      v_[i][j] = config_.beta2 * v_[i][j] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m_[i][j] / bc1;
      const double v_hat = v_[i][j] / bc2;
      vals[j] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
      if (config_.decoupled_weight_decay) {
        vals[j] -= config_.lr * config_.weight_decay * vals[j];
      }
    }
  }
}

void Adam::zero_grad() {
  for (Tensor& p : params_) p.zero_grad();
}

void Adam::restore(std::int64_t step_count, std::vector<std::vector<double>> m,
                   std::vector<std::vector<double>> v) {
  if (m.size() != params_.size() || v.size() != params_.size()) {
    throw ShapeError("adam: restored moment count does not match parameter count");
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (m[i].size() != params_[i].size() || v[i].size() != params_[i].size()) {
      throw ShapeError("adam: restored moment shape mismatch at parameter " +
                       std::to_string(i));
    }
  }
  step_count_ = step_count;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace regada
