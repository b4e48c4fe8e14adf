#include "regada/nn.hpp"

#include <cmath>

namespace regada {

Tensor init_weight(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  std::vector<double> v(fan_in * fan_out);
  for (double& x : v) x = rng.uniform(-bound, bound);
  return Tensor({fan_in, fan_out}, std::move(v), /*requires_grad=*/true);
}

Linear::Linear(std::size_t in, std::size_t out, bool with_bias, Rng& rng)
    : weight(init_weight(in, out, rng)) {
  if (with_bias) bias = Tensor::zeros({out}, /*requires_grad=*/true);
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = matmul(x, weight);
  if (bias.defined()) y = add_bias(y, bias);
  return y;
}

BatchNorm::BatchNorm(std::size_t dim)
    : gamma(Tensor::full({dim}, 1.0, true)),
      beta(Tensor::zeros({dim}, true)),
      running_mean(dim, 0.0),
      running_var(dim, 1.0) {}

Tensor batch_norm(const Tensor& x, BatchNorm& state, Mode mode) {
  if (x.rank() != 2 || x.shape()[1] != state.dim()) {
    throw ShapeError("batch_norm: expected [B," + std::to_string(state.dim()) +
                     "] input, got " + shape_string(x.shape()));
  }
  const std::size_t b = x.shape()[0], n = x.shape()[1];
  const double eps = state.eps;

  if (mode == Mode::eval) {
    // y = gamma * (x - rm) / sqrt(rv + eps) + beta, per column.
    std::vector<double> v(b * n), xhat(b * n), inv_std(n);
    for (std::size_t j = 0; j < n; ++j)
      inv_std[j] = 1.0 / std::sqrt(state.running_var[j] + eps);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double h = (x.values()[i * n + j] - state.running_mean[j]) * inv_std[j];
        xhat[i * n + j] = h;
        v[i * n + j] = state.gamma.values()[j] * h + state.beta.values()[j];
      }
    }
    Tensor out({b, n}, std::move(v));
    auto xi = x.impl();
    auto gi = state.gamma.impl();
    auto bi = state.beta.impl();
    auto oi = out.impl();
    Tape* tape = Tape::current();
    if (tape != nullptr && (xi->needs_grad() || gi->needs_grad() || bi->needs_grad())) {
      oi->graph = true;
      tape->record({xi, gi, bi}, oi,
                   [xi, gi, bi, oi, b, n, xhat = std::move(xhat),
                    inv_std = std::move(inv_std)]() {
        for (std::size_t i = 0; i < b; ++i) {
          const double* dy = oi->grad.data() + i * n;
          for (std::size_t j = 0; j < n; ++j) {
            if (gi->needs_grad()) {
              gi->ensure_grad();
              gi->grad[j] += dy[j] * xhat[i * n + j];
            }
            if (bi->needs_grad()) {
              bi->ensure_grad();
              bi->grad[j] += dy[j];
            }
            if (xi->needs_grad()) {
              xi->ensure_grad();
              xi->grad[i * n + j] += dy[j] * gi->values[j] * inv_std[j];
            }
          }
        }
      });
    }
    return out;
  }

  if (b < 2) {
    throw ShapeError("batch_norm: train mode requires a batch of at least 2 rows, got " +
                     std::to_string(b));
  }
  std::vector<double> mu(n, 0.0), var(n, 0.0), inv_std(n);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < n; ++j) mu[j] += x.values()[i * n + j];
  for (std::size_t j = 0; j < n; ++j) mu[j] /= static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = x.values()[i * n + j] - mu[j];
      var[j] += d * d;
    }
  for (std::size_t j = 0; j < n; ++j) {
    var[j] /= static_cast<double>(b);
    inv_std[j] = 1.0 / std::sqrt(var[j] + eps);
  }

  std::vector<double> v(b * n), xhat(b * n);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double h = (x.values()[i * n + j] - mu[j]) * inv_std[j];
      xhat[i * n + j] = h;
      v[i * n + j] = state.gamma.values()[j] * h + state.beta.values()[j];
    }

  // Fold batch statistics into the running estimates (biased variance).
  for (std::size_t j = 0; j < n; ++j) {
    state.running_mean[j] =
        (1.0 - state.momentum) * state.running_mean[j] + state.momentum * mu[j];
    state.running_var[j] =
        (1.0 - state.momentum) * state.running_var[j] + state.momentum * var[j];
  }

  Tensor out({b, n}, std::move(v));
  auto xi = x.impl();
  auto gi = state.gamma.impl();
  auto bi = state.beta.impl();
  auto oi = out.impl();
  Tape* tape = Tape::current();
  if (tape != nullptr && (xi->needs_grad() || gi->needs_grad() || bi->needs_grad())) {
    oi->graph = true;
    tape->record({xi, gi, bi}, oi,
                 [xi, gi, bi, oi, b, n, xhat = std::move(xhat),
                  inv_std = std::move(inv_std)]() {
      const double inv_b = 1.0 / static_cast<double>(b);
      for (std::size_t j = 0; j < n; ++j) {
        double sum_dy = 0.0, sum_dy_h = 0.0;
        for (std::size_t i = 0; i < b; ++i) {
          sum_dy += oi->grad[i * n + j];
          sum_dy_h += oi->grad[i * n + j] * xhat[i * n + j];
        }
        if (gi->needs_grad()) {
          gi->ensure_grad();
          gi->grad[j] += sum_dy_h;
        }
        if (bi->needs_grad()) {
          bi->ensure_grad();
          bi->grad[j] += sum_dy;
        }
        if (xi->needs_grad()) {
          xi->ensure_grad();
          const double g = gi->values[j];
          for (std::size_t i = 0; i < b; ++i) {
            const double dy = oi->grad[i * n + j];
            xi->grad[i * n + j] +=
                g * inv_std[j] *
                (dy - inv_b * sum_dy - xhat[i * n + j] * inv_b * sum_dy_h);
          }
        }
      }
    });
  }
  return out;
}

LayerNormAffine::LayerNormAffine(std::size_t dim)
    : gamma(Tensor::full({dim}, 1.0, true)), beta(Tensor::zeros({dim}, true)) {}

}  // namespace regada
