#include "sf/metrics/saliency.hpp"

#include <algorithm>
#include <cmath>

namespace sf::metrics {

GridCell fixation_to_cell(const Fixation& f, int screen_w, int screen_h, int grid_w, int grid_h) {
  const int col = static_cast<int>(std::floor(f.x * grid_w / screen_w));
  const int row = static_cast<int>(std::floor(f.y * grid_h / screen_h));
  return {std::clamp(row, 0, grid_h - 1), std::clamp(col, 0, grid_w - 1)};
}

namespace {

std::vector<double> gaussian_kernel(double sigma, int& radius) {
  radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  for (int i = -radius; i <= radius; ++i)
    k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  return k;
}

}  // namespace

SaliencyMap fixation_density(const ObserverPool& pool, double sigma_px, int grid_w, int grid_h) {
  if (pool.scanpaths.empty()) throw EmptyPool("synthesize_saliency: observer pool is empty");
  if (!(sigma_px > 0.0)) throw Error("synthesize_saliency: sigma must be positive");
  require_valid(pool);
  const int sw = pool.scanpaths.front().screen_w;
  const int sh = pool.scanpaths.front().screen_h;
  const int gw = grid_w > 0 ? grid_w : sw;
  const int gh = grid_h > 0 ? grid_h : sh;

  SaliencyMap binary(gw, gh, 0.0);
  for (const auto& sp : pool.scanpaths)
    for (const auto& f : sp.fixations) {
      const auto cell = fixation_to_cell(f, sw, sh, gw, gh);
      binary.at(cell.row, cell.col) = 1.0;
    }

  // separable: sigma is given in screen pixels, rescale per axis to the grid
  int rx = 0, ry = 0;
  const auto kx = gaussian_kernel(sigma_px * gw / sw, rx);
  const auto ky = gaussian_kernel(sigma_px * gh / sh, ry);
  SaliencyMap tmp(gw, gh, 0.0);
  for (int r = 0; r < gh; ++r)
    for (int c = 0; c < gw; ++c) {
      const double v = binary.at(r, c);
      if (v == 0.0) continue;
      for (int d = -rx; d <= rx; ++d) {
        const int cc = c + d;
        if (cc >= 0 && cc < gw) tmp.at(r, cc) += v * kx[static_cast<std::size_t>(d + rx)];
      }
    }
  SaliencyMap out(gw, gh, 0.0);
  for (int r = 0; r < gh; ++r)
    for (int d = -ry; d <= ry; ++d) {
      const int rr = r + d;
      if (rr < 0 || rr >= gh) continue;
      const double kv = ky[static_cast<std::size_t>(d + ry)];
      for (int c = 0; c < gw; ++c) out.at(rr, c) += tmp.at(r, c) * kv;
    }
  return out;
}

SaliencyMap synthesize_saliency(const ObserverPool& pool, double sigma_px, int grid_w, int grid_h) {
  SaliencyMap m = fixation_density(pool, sigma_px, grid_w, grid_h);
  const double mx = *std::max_element(m.values.begin(), m.values.end());
  if (mx > 0.0)
    for (auto& v : m.values) v /= mx;
  return m;
}

double nss(const Scanpath& sp, const SaliencyMap& sal) {
  if (sp.fixations.empty()) throw TooShort("nss: scanpath has no fixations");
  const double n = static_cast<double>(sal.values.size());
  double mean = 0.0;
  for (double v : sal.values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sal.values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd >= 1e-12)) throw FlatMap("nss: saliency map has zero variance");
  double acc = 0.0;
  for (const auto& f : sp.fixations) {
    const auto cell = fixation_to_cell(f, sp.screen_w, sp.screen_h, sal.width, sal.height);
    acc += (sal.at(cell.row, cell.col) - mean) / sd;
  }
  return acc / static_cast<double>(sp.fixations.size());
}

double map_quantile(const SaliencyMap& sal, double q) {
  if (sal.values.empty()) throw EmptyInput("map_quantile: empty map");
  std::vector<double> v = sal.values;
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double f = pos - static_cast<double>(lo);
  return v[lo] + f * (v[hi] - v[lo]);
}

double congruency(const Scanpath& sp, const SaliencyMap& sal, double q) {
  if (sp.fixations.empty()) throw TooShort("congruency: scanpath has no fixations");
  if (!(q > 0.0 && q < 1.0)) throw Error("congruency: percentile must lie in (0, 1)");
  const double threshold = map_quantile(sal, q);
  std::size_t hits = 0;
  for (const auto& f : sp.fixations) {
    const auto cell = fixation_to_cell(f, sp.screen_w, sp.screen_h, sal.width, sal.height);
    if (sal.at(cell.row, cell.col) >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sp.fixations.size());
}

}  // namespace sf::metrics
