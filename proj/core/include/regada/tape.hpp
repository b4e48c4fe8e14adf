#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "regada/tensor.hpp"

namespace regada {

// Ordered record of executed ops. While a Tape is alive every op that
// touches a gradient-flowing tensor appends a node; backward() replays the
// nodes in exact reverse execution order, accumulating adjoints. One tape
// may be active per thread at a time.
class Tape {
 public:
  Tape();
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  static Tape* current();

  // backward_fn reads the output's grad and accumulates into the inputs'.
  void record(std::vector<std::shared_ptr<detail::TensorImpl>> inputs,
              std::shared_ptr<detail::TensorImpl> output,
              std::function<void()> backward_fn);

  std::size_t size() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss) = 1 and runs every recorded node backwards.
  // Throws ShapeError if loss is not a scalar, Error if loss was not
  // recorded on this tape.
  void backward(const Tensor& loss);

 private:
  struct Node {
    std::vector<std::shared_ptr<detail::TensorImpl>> inputs;
    std::shared_ptr<detail::TensorImpl> output;
    std::function<void()> backward_fn;
  };
  std::vector<Node> nodes_;
};

}  // namespace regada
