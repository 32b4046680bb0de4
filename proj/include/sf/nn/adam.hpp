#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sf/nn/tensor.hpp"

namespace sf::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update with bias correction for step t (t >= 1), in place.
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               const AdamConfig& cfg, std::int64_t t);

using ParameterVisitor = std::function<void(Parameter&)>;

/// Optimizer state for one model. Moments are kept per trainable parameter in
/// visitation order; the model must visit its parameters in a fixed order.
class Adam {
 public:
  struct Moments {
    Tensor m;
    Tensor v;
  };

  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const noexcept { return cfg_; }
  void set_lr(double lr) noexcept { cfg_.lr = lr; }
  std::int64_t steps() const noexcept { return t_; }

  /// Applies one update from each parameter's grad slot.
  void step(const std::function<void(const ParameterVisitor&)>& for_each_parameter);

  std::vector<Moments>& moments() noexcept { return moments_; }
  const std::vector<Moments>& moments() const noexcept { return moments_; }
  void restore(std::int64_t t, std::vector<Moments> moments) {
    t_ = t;
    moments_ = std::move(moments);
  }

 private:
  AdamConfig cfg_;
  std::int64_t t_ = 0;
  std::vector<Moments> moments_;
};

/// Rescales all trainable gradients so their global L2 norm is at most
/// max_norm. Returns the norm before clipping.
double clip_grad_norm(const std::function<void(const ParameterVisitor&)>& for_each_parameter, double max_norm);

}  // namespace sf::nn
