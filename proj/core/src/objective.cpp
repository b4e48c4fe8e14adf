#include "regada/objective.hpp"

namespace regada {

std::string adverb_negative_mode_name(AdverbNegativeMode m) {
  return m == AdverbNegativeMode::antonym ? "antonym" : "random_nonmatching";
}

AdverbNegativeMode adverb_negative_mode_from_name(const std::string& name) {
  if (name == "antonym") return AdverbNegativeMode::antonym;
  if (name == "random_nonmatching") return AdverbNegativeMode::random_nonmatching;
  throw ConfigError("unknown adverb negative mode '" + name + "'");
}

void LossConfig::validate() const {
  if (lambda_action < 0.0 || lambda_adverb < 0.0 || lambda_reg < 0.0) {
    throw ConfigError("loss: lambdas must be non-negative");
  }
  if (lambda_action == 0.0 && lambda_adverb == 0.0 && lambda_reg == 0.0) {
    throw ConfigError("loss: at least one lambda must be positive");
  }
  if (margin <= 0.0) throw ConfigError("loss: margin must be positive");
}

Tensor triplet_loss(const Tensor& anchor, const Tensor& positive, const Tensor& negative,
                    double margin) {
  Tensor d_pos = rowwise_l2_norm(sub(anchor, positive));
  Tensor d_neg = rowwise_l2_norm(sub(anchor, negative));
  return mean(max0(add_const(sub(d_pos, d_neg), margin)));
}

Tensor regression_loss(const Tensor& anchor, const Tensor& positive) {
  return mean(rowwise_sum(square(sub(anchor, positive))));
}

LossTerms total_loss(const Tensor& anchor, const Tensor& positive,
                     const Tensor& neg_action, const Tensor& neg_adverb,
                     const LossConfig& config) {
  config.validate();
  LossTerms terms;
  Tensor total;
  auto accumulate = [&total](double weight, const Tensor& term) {
    Tensor weighted = scale(term, weight);
    total = total.defined() ? add(total, weighted) : weighted;
  };
  if (config.lambda_action > 0.0) {
    terms.action = triplet_loss(anchor, positive, neg_action, config.margin);
    accumulate(config.lambda_action, *terms.action);
  }
  if (config.lambda_adverb > 0.0) {
    terms.adverb = triplet_loss(anchor, positive, neg_adverb, config.margin);
    accumulate(config.lambda_adverb, *terms.adverb);
  }
  if (config.lambda_reg > 0.0) {
    terms.regression = regression_loss(anchor, positive);
    accumulate(config.lambda_reg, *terms.regression);
  }
  terms.total = total;
  return terms;
}

}  // namespace regada
