#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sf/core/types.hpp"
#include "sf/io/dataset.hpp"
#include "sf/io/features.hpp"
#include "sf/models/generator.hpp"
#include "sf/nn/tensor.hpp"

namespace sf::training {

/// One image as seen by the models: the generator input plus the observer pool.
struct TrainingExample {
  std::string image_id;
  nn::Tensor input;          // image (C x H x W) or precomputed features
  bool is_features = false;  // true when `input` bypasses the encoder
  ObserverPool pool;
};

/// Builds examples from dataset records. Images are loaded relative to
/// base_dir (or rendered from inline scenes); with `features`, the encoder is
/// bypassed. Throws ShapeMismatch when an image does not match the config,
/// MissingImage when a feature entry is absent.
std::vector<TrainingExample> make_examples(const std::vector<io::DatasetRecord>& records,
                                           const std::filesystem::path& base_dir,
                                           const models::GeneratorConfig& cfg,
                                           const io::FeatureMap* features = nullptr);

}  // namespace sf::training
