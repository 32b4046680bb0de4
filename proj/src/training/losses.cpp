#include "sf/training/losses.hpp"

#include <algorithm>
#include <cmath>

#include "sf/nn/ops.hpp"

namespace sf::training {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

double d_loss(double real_prob, double fake_prob) {
  return -(std::log(clamp_prob(real_prob)) + std::log(1.0 - clamp_prob(fake_prob)));
}

double g_loss(double fake_prob, bool saturating) {
  const double p = clamp_prob(fake_prob);
  return saturating ? std::log(1.0 - p) : -std::log(p);
}

nn::Var d_loss(nn::Var real_prob, nn::Var fake_prob) {
  constexpr double lo = kProbClamp, hi = 1.0 - kProbClamp;
  nn::Var real_term = nn::log_clamped(real_prob, lo, hi);
  nn::Var fake_term = nn::log_clamped(nn::add_scalar(nn::scale(fake_prob, -1.0), 1.0), lo, hi);
  return nn::scale(nn::sum(nn::add(real_term, fake_term)), -1.0);
}

nn::Var g_loss(nn::Var fake_prob, bool saturating) {
  constexpr double lo = kProbClamp, hi = 1.0 - kProbClamp;
  if (saturating) return nn::sum(nn::log_clamped(nn::add_scalar(nn::scale(fake_prob, -1.0), 1.0), lo, hi));
  return nn::scale(nn::sum(nn::log_clamped(fake_prob, lo, hi)), -1.0);
}

}  // namespace sf::training
