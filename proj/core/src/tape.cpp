#include "regada/tape.hpp"

namespace regada {

namespace {
thread_local Tape* g_current_tape = nullptr;
}

Tape::Tape() {
  if (g_current_tape != nullptr) {
    throw Error("a Tape is already active on this thread");
  }
  g_current_tape = this;
}

Tape::~Tape() { g_current_tape = nullptr; }

Tape* Tape::current() { return g_current_tape; }

void Tape::record(std::vector<std::shared_ptr<detail::TensorImpl>> inputs,
                  std::shared_ptr<detail::TensorImpl> output,
                  std::function<void()> backward_fn) {
  nodes_.push_back(Node{std::move(inputs), std::move(output), std::move(backward_fn)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ShapeError("backward() requires a scalar loss, got shape " +
                     shape_string(loss.shape()));
  }
  if (!loss.impl()->graph) {
    throw Error("loss is not connected to any recorded op on this tape");
  }
  loss.impl()->ensure_grad();
  loss.impl()->grad[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    // All consumers of this node's output have already run; an output with
    // no grad buffer received only zeros, so its adjoint is a no-op.
    if (it->output->grad.empty()) continue;
    it->backward_fn();
  }
}

}  // namespace regada
