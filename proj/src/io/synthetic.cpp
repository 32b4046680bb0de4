#include "sf/io/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sf/core/random.hpp"

namespace sf::io {

void SyntheticSpec::validate() const {
  if (fixed_blobs.empty() && n_blobs < 1) throw Error("synthetic spec: need at least one blob");
  if (n_observers < 1) throw Error("synthetic spec: need at least one observer");
  if (min_fixations < 1 || max_fixations < min_fixations) throw Error("synthetic spec: bad scanpath length range");
  if (screen_w < 1 || screen_h < 1 || image_size < 1 || saliency_size < 1) throw Error("synthetic spec: bad sizes");
  if (!(blob_sigma_min > 0.0) || blob_sigma_max < blob_sigma_min) throw Error("synthetic spec: bad blob sigma range");
  if (!(stay_prob >= 0.0 && stay_prob < 1.0)) throw Error("synthetic spec: stay_prob must lie in [0, 1)");
  if (obs_sigma < 0.0 || center_spread < 0.0 || margin < 0.0 || margin >= 0.5) throw Error("synthetic spec: bad spread");
  double wsum = 0.0;
  for (const auto& b : fixed_blobs) {
    if (!(b.sigma > 0.0) || b.weight < 0.0) throw Error("synthetic spec: bad fixed blob");
    wsum += b.weight;
  }
  if (!fixed_blobs.empty() && !(wsum > 0.0)) throw Error("synthetic spec: blob weights sum to zero");
}

namespace {

std::string numbered(const char* prefix, int i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

SyntheticScene draw_scene(const SyntheticSpec& spec, Rng& rng) {
  SyntheticScene scene;
  scene.image_size = spec.image_size;
  if (!spec.fixed_blobs.empty()) {
    scene.blobs = spec.fixed_blobs;
  } else {
    const double W = spec.screen_w, H = spec.screen_h;
    for (int k = 0; k < spec.n_blobs; ++k) {
      Blob b;
      b.x = W * std::clamp(0.5 + spec.center_spread * rng.normal(), spec.margin, 1.0 - spec.margin);
      b.y = H * std::clamp(0.5 + spec.center_spread * rng.normal(), spec.margin, 1.0 - spec.margin);
      b.sigma = W * rng.uniform(spec.blob_sigma_min, spec.blob_sigma_max);
      b.weight = 1.0;
      for (auto& c : b.color) c = rng.uniform(0.6, 1.0);
      scene.blobs.push_back(b);
    }
  }
  double wsum = 0.0;
  for (const auto& b : scene.blobs) wsum += b.weight;
  for (auto& b : scene.blobs) b.weight /= wsum;
  return scene;
}

Scanpath draw_observer(const SyntheticSpec& spec, const SyntheticScene& scene, const std::string& image_id, int obs,
                       Rng& rng) {
  Scanpath sp;
  sp.image_id = image_id;
  sp.observer_id = numbered("obs_", obs, 2);
  sp.screen_w = spec.screen_w;
  sp.screen_h = spec.screen_h;
  const int n = spec.min_fixations + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_fixations - spec.min_fixations + 1)));
  const double jitter = spec.obs_sigma * spec.screen_w;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || spec.stay_prob <= 0.0 || rng.uniform() >= spec.stay_prob) {
      double u = rng.uniform();
      k = 0;
      while (k + 1 < scene.blobs.size() && u >= scene.blobs[k].weight) u -= scene.blobs[k++].weight;
    }
    const auto& b = scene.blobs[k];
    Fixation f;
    f.x = std::clamp(b.x + jitter * rng.normal(), 0.0, static_cast<double>(spec.screen_w));
    f.y = std::clamp(b.y + jitter * rng.normal(), 0.0, static_cast<double>(spec.screen_h));
    sp.fixations.push_back(f);
  }
  return sp;
}

}  // namespace

Image render_scene(const SyntheticScene& scene, int screen_w, int screen_h) {
  const int n = scene.image_size;
  Image img{n, n, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n * 3)};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double x = (c + 0.5) * screen_w / n;
      const double y = (r + 0.5) * screen_h / n;
      double rgb[3] = {0.05, 0.05, 0.05};
      for (const auto& b : scene.blobs) {
        const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
        const double v = std::exp(-0.5 * d2 / (b.sigma * b.sigma));
        for (int ch = 0; ch < 3; ++ch) rgb[ch] += v * b.color[static_cast<std::size_t>(ch)];
      }
      for (int ch = 0; ch < 3; ++ch)
        img.pixels[(static_cast<std::size_t>(r) * n + c) * 3 + ch] =
            static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(rgb[ch], 0.0, 1.0)));
    }
  return img;
}

SaliencyMap scene_density(const SyntheticScene& scene, int screen_w, int screen_h, int grid_w, int grid_h) {
  SaliencyMap m(grid_w, grid_h);
  for (int r = 0; r < grid_h; ++r)
    for (int c = 0; c < grid_w; ++c) {
      const double x = (c + 0.5) * screen_w / grid_w;
      const double y = (r + 0.5) * screen_h / grid_h;
      double v = 0.0;
      for (const auto& b : scene.blobs) {
        const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
        v += b.weight * std::exp(-0.5 * d2 / (b.sigma * b.sigma)) / (2.0 * std::numbers::pi * b.sigma * b.sigma);
      }
      m.at(r, c) = v;
    }
  const double mx = *std::max_element(m.values.begin(), m.values.end());
  if (mx > 0.0)
    for (auto& v : m.values) v /= mx;
  return m;
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec, int n_images, std::uint64_t seed) {
  spec.validate();
  if (n_images < 0) throw Error("generate_synthetic: negative image count");
  SyntheticDataset ds;
  const int width = std::max(4, static_cast<int>(std::to_string(std::max(n_images - 1, 0)).size()));
  for (int i = 0; i < n_images; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const std::string id = numbered("img_", i, width);
    SyntheticScene scene = draw_scene(spec, rng);

    DatasetRecord rec;
    rec.image_id = id;
    rec.image_path = "images/" + id + ".ppm";
    rec.saliency_path = "saliency/" + id + ".pgm";
    rec.screen_w = spec.screen_w;
    rec.screen_h = spec.screen_h;
    for (int o = 0; o < spec.n_observers; ++o) rec.observers.push_back(draw_observer(spec, scene, id, o, rng));

    ds.images.push_back(render_scene(scene, spec.screen_w, spec.screen_h));
    ds.saliency.push_back(scene_density(scene, spec.screen_w, spec.screen_h, spec.saliency_size, spec.saliency_size));
    rec.synthetic = std::move(scene);
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

}  // namespace sf::io
