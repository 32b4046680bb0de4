#pragma once

#include <functional>
#include <vector>

#include "sf/nn/tensor.hpp"

namespace sf::nn {

class Tape;

/// Handle to a node recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const noexcept { return tape != nullptr && id >= 0; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  const Tensor& grad() const;
};

/// Reverse-mode tape. Nodes are appended in execution order; backward() walks
/// them in exact reverse, accumulating gradients additively. Parameter leaves
/// borrow the parameter's value and, after backward(), add their gradient into
/// Parameter::grad.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives a gradient.
  Var constant(Tensor t);
  /// Leaf whose gradient is kept on the tape (for input sensitivities).
  Var input(Tensor t);
  /// Leaf bound to a parameter. With track = false it acts as a constant.
  Var param(Parameter& p, bool track = true);

  /// Appends an op node. `backward` receives this node's id and must add into
  /// the gradients of its inputs through grad_mut().
  Var push(Tensor value, std::vector<int> inputs, BackwardFn backward);

  /// Seeds d(out)/d(out) with ones and propagates. Parameter gradients are
  /// accumulated into their Parameter objects.
  void backward(Var out);

  const Tensor& value(int id) const;
  const Tensor& grad(int id) const;
  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  /// Gradient buffer of `id`, allocated on first use; nullptr when the node
  /// does not require a gradient.
  Tensor* grad_mut(int id);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    const Tensor* borrowed = nullptr;
    Tensor grad;
    Parameter* param = nullptr;
    bool needs_grad = false;
    std::vector<int> inputs;
    BackwardFn backward;

    const Tensor& value() const { return borrowed ? *borrowed : owned; }
  };

  Var leaf(Tensor t, bool needs_grad);

  std::vector<Node> nodes_;
};

}  // namespace sf::nn
