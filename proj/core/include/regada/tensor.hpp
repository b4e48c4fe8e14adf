#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "regada/errors.hpp"

namespace regada {

namespace detail {

struct TensorImpl {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  // True for tensors that participate in gradient flow: leaves with
  // requires_grad and every op output downstream of one.
  bool graph = false;

  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
  }
  bool needs_grad() const { return requires_grad || graph; }
};

}  // namespace detail

// Dense row-major tensor of 64-bit reals with value semantics on the
// handle; the payload is shared. Rank 1 and 2 cover everything the model
// needs.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> values,
         bool requires_grad = false);

  static Tensor zeros(std::vector<std::size_t> shape, bool requires_grad = false);
  static Tensor full(std::vector<std::size_t> shape, double value,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const std::vector<std::size_t>& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t size() const { return impl_->values.size(); }

  // Rank-2 accessors; a rank-1 tensor counts as a single row.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> values() const { return impl_->values; }
  std::span<double> mutable_values() { return impl_->values; }
  double operator[](std::size_t i) const { return impl_->values[i]; }
  double at(std::size_t r, std::size_t c) const { return impl_->values[r * cols() + c]; }

  // Value of a single-element tensor.
  double item() const;

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool v);

  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const double> grad() const;
  void zero_grad() {
    if (impl_ && !impl_->grad.empty()) impl_->grad.assign(impl_->values.size(), 0.0);
  }

  const std::shared_ptr<detail::TensorImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<detail::TensorImpl> impl_;
};

std::size_t shape_size(const std::vector<std::size_t>& shape);
std::string shape_string(const std::vector<std::size_t>& shape);

}  // namespace regada
