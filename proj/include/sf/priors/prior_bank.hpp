#pragma once

#include <string>
#include <vector>

#include "sf/nn/adam.hpp"
#include "sf/nn/tape.hpp"

namespace sf::priors {

/// Axis-aligned 2D Gaussian over normalized image coordinates. Standard
/// deviations are stored as logarithms so they stay positive under any update.
struct GaussianPrior {
  nn::Parameter mu_x;
  nn::Parameter mu_y;
  nn::Parameter log_sigma_x;
  nn::Parameter log_sigma_y;

  double mean_x() const { return mu_x.value[0]; }
  double mean_y() const { return mu_y.value[0]; }
  double sigma_x() const;
  double sigma_y() const;

  void for_each_parameter(const nn::ParameterVisitor& fn);
};

/// Density of `p` at normalized (x, y):
///   1 / (2 pi sx sy) * exp(-((x - mx)^2 / (2 sx^2) + (y - my)^2 / (2 sy^2)))
double eval_gaussian(const GaussianPrior& p, double x, double y);

class PriorBank {
 public:
  PriorBank() = default;
  explicit PriorBank(std::vector<GaussianPrior> priors) : priors_(std::move(priors)) {}

  std::size_t size() const noexcept { return priors_.size(); }
  GaussianPrior& operator[](std::size_t i) { return priors_[i]; }
  const GaussianPrior& operator[](std::size_t i) const { return priors_[i]; }

  /// Visits mu_x, mu_y, log_sigma_x, log_sigma_y of each prior in order.
  void for_each_parameter(const nn::ParameterVisitor& fn);

  /// Keeps trainable means inside [0, 1].
  void clamp_means();

 private:
  std::vector<GaussianPrior> priors_;
};

/// Builds n priors (n a perfect square) with means on a uniform sqrt(n) x
/// sqrt(n) grid over [0.125, 0.875]^2 and sigma = 0.15 on both axes.
/// By default only the two log-sigmas are trainable; with trainable_means the
/// means train and the sigmas stay fixed. Parameter names are
/// `<prefix>.<i>.<field>`.
PriorBank init_bank(int n, bool trainable_means = false, const std::string& prefix = "gen.priors");

/// N x h x w stack; map n at (r, c) is eval_gaussian at ((c + 0.5) / w, (r + 0.5) / h).
nn::Tensor render_bank(const PriorBank& bank, int h, int w);

/// Differentiable rendering with respect to every trainable prior field.
nn::Var render_bank(nn::Tape& tape, PriorBank& bank, int h, int w, bool track = true);

}  // namespace sf::priors
