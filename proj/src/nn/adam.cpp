#include "sf/nn/adam.hpp"

#include <cmath>

#include "sf/core/errors.hpp"

namespace sf::nn {

void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               const AdamConfig& cfg, std::int64_t t) {
  if (t < 1) throw Error("adam_step: t must be >= 1");
  if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size())
    throw ShapeMismatch("adam_step: parameter, gradient and moment sizes differ");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

void Adam::step(const std::function<void(const ParameterVisitor&)>& for_each_parameter) {
  ++t_;
  std::size_t k = 0;
  for_each_parameter([&](Parameter& p) {
    if (!p.trainable) return;
    if (k == moments_.size()) moments_.push_back({Tensor(p.value.shape()), Tensor(p.value.shape())});
    auto& mo = moments_[k++];
    if (mo.m.size() != p.value.size()) throw ShapeMismatch("adam: moment shape drifted for " + p.name);
    if (p.grad.size() != p.value.size()) p.grad = Tensor(p.value.shape());
    adam_step(p.value.values(), p.grad.values(), mo.m.values(), mo.v.values(), cfg_, t_);
  });
}

double clip_grad_norm(const std::function<void(const ParameterVisitor&)>& for_each_parameter, double max_norm) {
  double sq = 0.0;
  for_each_parameter([&](Parameter& p) {
    if (!p.trainable) return;
    for (double g : p.grad.values()) sq += g * g;
  });
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double f = max_norm / norm;
    for_each_parameter([&](Parameter& p) {
      if (!p.trainable) return;
      for (double& g : p.grad.values()) g *= f;
    });
  }
  return norm;
}

}  // namespace sf::nn
