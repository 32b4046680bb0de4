#include "sf/nn/init.hpp"

#include <algorithm>
#include <cmath>

namespace sf::nn {

Tensor kaiming_uniform(Shape shape, int fan_in, double slope, Rng& rng) {
  Tensor t(std::move(shape));
  const double bound = std::sqrt(6.0 / ((1.0 + slope * slope) * std::max(fan_in, 1)));
  for (auto& v : t.values()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace sf::nn
