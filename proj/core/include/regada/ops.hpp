#pragma once

#include <span>

#include "regada/rng.hpp"
#include "regada/tape.hpp"
#include "regada/tensor.hpp"

namespace regada {

enum class Mode { train, eval };

// Elementwise binary ops require identical shapes; there is no implicit
// broadcasting. All ops record their adjoints on the active tape.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor square(const Tensor& x);
Tensor sigmoid(const Tensor& x);  // stable branch form
Tensor relu(const Tensor& x);     // subgradient 0 at the kink
Tensor leaky_relu(const Tensor& x, double negative_slope);

// Constant (non-differentiated) scalar arithmetic.
Tensor scale(const Tensor& x, double c);
Tensor add_const(const Tensor& x, double c);

// y = s * x where s is a single-element tensor with its own gradient.
Tensor scalar_mul(const Tensor& s, const Tensor& x);

// Dense products over rank-2 operands.
Tensor matmul(const Tensor& a, const Tensor& b);     // [m,k]x[k,n] -> [m,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // [m,k]x[n,k] -> [m,n], b transposed

// y[i, :] = x[i, :] + b  with b of shape [n].
Tensor add_bias(const Tensor& x, const Tensor& b);

// Row/column assembly.
Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t count);
Tensor stack_rows(std::span<const Tensor> rows);  // k tensors [1,n] -> [k,n]

// Same data, new shape (element count must match); adjoint passes through.
Tensor reshape(const Tensor& x, std::vector<std::size_t> shape);

// Max-subtracted softmax along `axis` (rank-1: axis 0; rank-2: 0 or 1).
Tensor softmax(const Tensor& x, std::size_t axis);

// Per-row normalization to zero mean / unit variance (eps 1e-5) followed by
// the learnable affine y = gamma * xhat + beta.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta);

// Inverted dropout: train mode zeroes entries with probability p and scales
// survivors by 1/(1-p); eval mode is the identity and draws nothing from
// the stream. p >= 1 is a ConfigError.
Tensor dropout(const Tensor& x, double p, Mode mode, Rng& rng);

// Reductions. l2_norm uses subgradient 0 at the origin.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor l2_norm(const Tensor& x);
Tensor rowwise_l2_norm(const Tensor& x);  // [m,n] -> [m,1]
Tensor rowwise_sum(const Tensor& x);      // [m,n] -> [m,1]

// max(0, x) elementwise; same kink convention as relu.
inline Tensor max0(const Tensor& x) { return relu(x); }

// Populates grads of every gradient-flowing tensor reachable from loss.
void backward(const Tensor& loss);

namespace detail {
void check_finite(const Tensor& t, const char* op_name);
}

}  // namespace regada
