#include "regada/tensor.hpp"

#include <numeric>
#include <sstream>

namespace regada {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values,
               bool requires_grad) {
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("tensor extents must be positive, got " + shape_string(shape));
  }
  if (shape.empty()) throw ShapeError("tensor rank must be >= 1");
  if (shape_size(shape) != values.size()) {
    throw ShapeError("value count " + std::to_string(values.size()) +
                     " does not match shape " + shape_string(shape));
  }
  impl_ = std::make_shared<detail::TensorImpl>();
  impl_->shape = std::move(shape);
  impl_->values = std::move(values);
  impl_->requires_grad = requires_grad;
  impl_->graph = requires_grad;
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
  std::vector<double> v(shape_size(shape), 0.0);
  return Tensor(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value, bool requires_grad) {
  std::vector<double> v(shape_size(shape), value);
  return Tensor(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor({1}, {value}, requires_grad);
}

std::size_t Tensor::rows() const {
  return rank() == 1 ? 1 : impl_->shape[0];
}

std::size_t Tensor::cols() const {
  return rank() == 1 ? impl_->shape[0] : impl_->shape[impl_->shape.size() - 1];
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item() requires a single-element tensor, got shape " +
                     shape_string(shape()));
  }
  return impl_->values[0];
}

Tensor& Tensor::set_requires_grad(bool v) {
  impl_->requires_grad = v;
  if (v) impl_->graph = true;
  return *this;
}

std::span<const double> Tensor::grad() const {
  if (impl_->grad.empty()) {
    throw Error("tensor has no gradient; run backward() first");
  }
  return impl_->grad;
}

}  // namespace regada
