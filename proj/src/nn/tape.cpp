#include "sf/nn/tape.hpp"

#include "sf/core/errors.hpp"

namespace sf::nn {

const Tensor& Var::value() const { return tape->value(id); }
const Tensor& Var::grad() const { return tape->grad(id); }

Var Tape::leaf(Tensor t, bool needs_grad) {
  Node n;
  n.owned = std::move(t);
  n.needs_grad = needs_grad;
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Tensor t) { return leaf(std::move(t), false); }

Var Tape::input(Tensor t) { return leaf(std::move(t), true); }

Var Tape::param(Parameter& p, bool track) {
  Node n;
  n.borrowed = &p.value;
  n.needs_grad = track && p.trainable;
  n.param = n.needs_grad ? &p : nullptr;
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::push(Tensor value, std::vector<int> inputs, BackwardFn backward) {
  Node n;
  n.owned = std::move(value);
  for (int i : inputs) {
    if (i < 0 || static_cast<std::size_t>(i) >= nodes_.size()) throw Error("tape: dangling input");
    n.needs_grad = n.needs_grad || nodes_[static_cast<std::size_t>(i)].needs_grad;
  }
  n.inputs = std::move(inputs);
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Tape::value(int id) const { return nodes_.at(static_cast<std::size_t>(id)).value(); }

const Tensor& Tape::grad(int id) const { return nodes_.at(static_cast<std::size_t>(id)).grad; }

Tensor* Tape::grad_mut(int id) {
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.needs_grad) return nullptr;
  if (n.grad.size() != n.value().size()) n.grad = Tensor(n.value().shape(), 0.0);
  return &n.grad;
}

void Tape::backward(Var out) {
  if (out.tape != this) throw Error("tape: backward on a foreign variable");
  Tensor* seed = grad_mut(out.id);
  if (!seed) return;
  for (auto& g : seed->values()) g += 1.0;
  for (int id = out.id; id >= 0; --id) {
    auto& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.needs_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      auto& pg = n.param->grad;
      if (pg.size() != n.grad.size()) pg = Tensor(n.param->value.shape(), 0.0);
      for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
    }
  }
}

}  // namespace sf::nn
