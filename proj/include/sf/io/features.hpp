#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "sf/nn/tensor.hpp"

namespace sf::io {

/// Externally computed backbone features, keyed by image id.
using FeatureMap = std::map<std::string, nn::Tensor>;

/// Reads a feature file (blob container, one entry per image id). Every entry
/// must have shape `expected` (channels x h x w) or ShapeMismatch is thrown.
FeatureMap import_features(const std::filesystem::path& path, const nn::Shape& expected);

void export_features(const std::filesystem::path& path, const FeatureMap& features);

/// Throws MissingImage when `image_id` has no entry.
const nn::Tensor& features_for(const FeatureMap& features, const std::string& image_id);

}  // namespace sf::io
