#pragma once

#include <optional>
#include <string>

#include "regada/ops.hpp"

namespace regada {

enum class AdverbNegativeMode { antonym, random_nonmatching };

std::string adverb_negative_mode_name(AdverbNegativeMode m);
AdverbNegativeMode adverb_negative_mode_from_name(const std::string& name);

struct LossConfig {
  double lambda_action = 1.0;
  double lambda_adverb = 2.0;
  double lambda_reg = 1.0;
  double margin = 0.5;
  AdverbNegativeMode adverb_negative_mode = AdverbNegativeMode::antonym;

  void validate() const;
};

// Batched triplet hinge: mean over rows of
//   max(0, ||a - p||_2 - ||a - n||_2 + margin),
// subgradient 0 at the hinge kink and at zero distances.
Tensor triplet_loss(const Tensor& anchor, const Tensor& positive, const Tensor& negative,
                    double margin);

// Mean over rows of the squared Euclidean distance (summed over
// coordinates) between anchor and positive.
Tensor regression_loss(const Tensor& anchor, const Tensor& positive);

// Weighted-sum objective. Terms with a zero weight are skipped entirely;
// their reported component is 0 and no graph is built for them.
struct LossTerms {
  std::optional<Tensor> action;
  std::optional<Tensor> adverb;
  std::optional<Tensor> regression;
  Tensor total;
};

// neg_action / neg_adverb may be undefined when the matching lambda is 0.
LossTerms total_loss(const Tensor& anchor, const Tensor& positive,
                     const Tensor& neg_action, const Tensor& neg_adverb,
                     const LossConfig& config);

}  // namespace regada
