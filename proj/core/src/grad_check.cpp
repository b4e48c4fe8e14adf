#include "regada/grad_check.hpp"

#include <cmath>

#include "regada/ops.hpp"

namespace regada {

GradCheckResult grad_check(const std::function<Tensor()>& f,
                           std::span<Tensor> leaves, double h) {
  // Analytic pass.
  std::vector<std::vector<double>> analytic;
  {
    for (Tensor& leaf : leaves) leaf.zero_grad();
    Tape tape;
    Tensor loss = f();
    if (!std::isfinite(loss.item())) {
      throw Error("grad_check: program evaluated to a non-finite value");
    }
    tape.backward(loss);
    for (Tensor& leaf : leaves) {
      if (leaf.has_grad()) {
        analytic.emplace_back(leaf.grad().begin(), leaf.grad().end());
      } else {
        analytic.emplace_back(leaf.size(), 0.0);
      }
      leaf.zero_grad();
    }
  }

  GradCheckResult result;
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    auto vals = leaves[li].mutable_values();
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const double saved = vals[j];
      vals[j] = saved + h;
      const double up = f().item();
      vals[j] = saved - h;
      const double down = f().item();
      vals[j] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw Error("grad_check: non-finite evaluation while perturbing leaf " +
                    std::to_string(li) + ", coord " + std::to_string(j));
      }
      const double fd = (up - down) / (2.0 * h);
      const double ad = analytic[li][j];
      const double denom = std::max({std::fabs(ad), std::fabs(fd), 1e-3});
      const double rel = std::fabs(ad - fd) / denom;
      ++result.coords_checked;
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst = "leaf " + std::to_string(li) + ", coord " + std::to_string(j);
      }
    }
  }
  return result;
}

}  // namespace regada
