#pragma once

#include "sf/nn/tape.hpp"

namespace sf::training {

/// Probabilities are clamped into [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-7;

/// -[log D(real) + log(1 - D(fake))]
double d_loss(double real_prob, double fake_prob);
nn::Var d_loss(nn::Var real_prob, nn::Var fake_prob);

/// Non-saturating -log D(fake); with `saturating`, log(1 - D(fake)).
double g_loss(double fake_prob, bool saturating = false);
nn::Var g_loss(nn::Var fake_prob, bool saturating = false);

}  // namespace sf::training
