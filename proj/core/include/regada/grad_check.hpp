#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "regada/tensor.hpp"

namespace regada {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;
  std::string worst;  // "leaf i, coord j" of the worst coordinate
};

// Compares reverse-mode gradients of a scalar program against central finite
// differences. `f` must rebuild the program from the current leaf values on
// every call and be deterministic (reseed any internal randomness inside f).
//
// Relative error per coordinate is |ad - fd| / max(|ad|, |fd|, 1e-3); the
// floor turns the comparison absolute for near-zero gradients where finite
// differences lose precision.
GradCheckResult grad_check(const std::function<Tensor()>& f,
                           std::span<Tensor> leaves, double h = 1e-5);

}  // namespace regada
