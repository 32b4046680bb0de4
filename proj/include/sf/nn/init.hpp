#pragma once

#include "sf/core/random.hpp"
#include "sf/nn/tensor.hpp"

namespace sf::nn {

/// Kaiming-uniform fan-in initialization for a Leaky-ReLU stack:
/// U(-b, b) with b = sqrt(6 / ((1 + slope^2) * fan_in)).
Tensor kaiming_uniform(Shape shape, int fan_in, double slope, Rng& rng);

}  // namespace sf::nn
