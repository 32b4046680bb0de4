#include "sf/training/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "sf/core/random.hpp"

namespace sf::training {

Scanpath harmonize_length(const Scanpath& sp, int length) {
  if (sp.fixations.empty()) throw TooShort("harmonize_length: empty scanpath");
  if (length < 1) throw Error("harmonize_length: length must be >= 1");
  Scanpath out = sp;
  const int n = static_cast<int>(sp.fixations.size());
  if (n >= length) {
    out.fixations.resize(static_cast<std::size_t>(length));
    return out;
  }
  out.fixations.clear();
  for (int k = 0; k < length; ++k) {
    const double pos = length == 1 ? 0.0 : static_cast<double>(k) * (n - 1) / (length - 1);
    const int i0 = std::min(static_cast<int>(std::floor(pos)), n - 1);
    const int i1 = std::min(i0 + 1, n - 1);
    const double f = pos - i0;
    const auto& a = sp.fixations[static_cast<std::size_t>(i0)];
    const auto& b = sp.fixations[static_cast<std::size_t>(i1)];
    out.fixations.push_back({(1.0 - f) * a.x + f * b.x, (1.0 - f) * a.y + f * b.y, std::nullopt});
  }
  return out;
}

std::uint64_t image_key(const std::string& image_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : image_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t observer_index(std::size_t pool_size, std::uint64_t key, std::int64_t step, std::int64_t period,
                           std::uint64_t seed) {
  if (pool_size == 0) throw EmptyPool("sample_real: observer pool is empty");
  const std::int64_t window = period > 0 ? step / period : 0;
  Rng rng(mix_seed(mix_seed(seed, key), static_cast<std::uint64_t>(window)));
  return static_cast<std::size_t>(rng.below(pool_size));
}

Scanpath sample_real(const ObserverPool& pool, std::int64_t step, std::int64_t period, std::uint64_t seed, int length) {
  const std::size_t k = observer_index(pool.scanpaths.size(), image_key(pool.image_id), step, period, seed);
  return harmonize_length(pool.scanpaths[k], length);
}

}  // namespace sf::training
