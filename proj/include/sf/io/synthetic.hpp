#pragma once

#include <cstdint>
#include <vector>

#include "sf/core/types.hpp"
#include "sf/io/dataset.hpp"
#include "sf/io/raster.hpp"

namespace sf::io {

/// Desk-scale stand-in for an eye-tracking corpus: every image is a few bright
/// Gaussian blobs on a dark background, and observers fixate the blobs.
/// Distances below are fractions of the screen width unless noted.
struct SyntheticSpec {
  int n_blobs = 2;
  std::vector<Blob> fixed_blobs;  // screen pixels; when set, used for every image
  double blob_sigma_min = 0.04;
  double blob_sigma_max = 0.06;
  double center_spread = 0.15;  // std of blob centers around the screen center
  double margin = 0.1;          // blob centers stay inside [margin, 1 - margin]
  int n_observers = 15;
  int min_fixations = 10;
  int max_fixations = 15;
  double obs_sigma = 0.015;  // per-fixation jitter around the chosen blob
  // Probability that a fixation stays on the previous fixation's blob; otherwise
  // the blob is redrawn from the mixture (which stays the marginal either way).
  double stay_prob = 0.0;
  int screen_w = 128;
  int screen_h = 128;
  int image_size = 64;
  int saliency_size = 64;

  /// Throws sf::Error on an inconsistent spec.
  void validate() const;
};

struct SyntheticDataset {
  std::vector<DatasetRecord> records;
  std::vector<Image> images;
  std::vector<SaliencyMap> saliency;  // exact mixture density, max-normalized
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec, int n_images, std::uint64_t seed);

/// image_size x image_size RGB rendering of the scene.
Image render_scene(const SyntheticScene& scene, int screen_w, int screen_h);

/// Blob mixture density sampled at grid pixel centers, max-normalized.
SaliencyMap scene_density(const SyntheticScene& scene, int screen_w, int screen_h, int grid_w, int grid_h);

}  // namespace sf::io
