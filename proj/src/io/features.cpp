#include "sf/io/features.hpp"

#include "sf/io/blobfile.hpp"

namespace sf::io {

FeatureMap import_features(const std::filesystem::path& path, const nn::Shape& expected) {
  BlobFile blob;
  try {
    blob = read_blobfile(path);
  } catch (const CorruptBlob& e) {
    throw IoError("feature file " + path.string() + ": " + e.what());
  }
  FeatureMap out;
  for (auto& e : blob.entries) {
    if (e.tensor.shape() != expected)
      throw ShapeMismatch("feature entry '" + e.name + "' has shape " + nn::shape_str(e.tensor.shape()) +
                          ", model expects " + nn::shape_str(expected));
    out.emplace(e.name, std::move(e.tensor));
  }
  return out;
}

void export_features(const std::filesystem::path& path, const FeatureMap& features) {
  BlobFile blob;
  blob.meta = {{"format", "scanpath-forge-features"}, {"version", 1}};
  for (const auto& [id, t] : features) blob.entries.push_back({id, t});
  write_blobfile(path, blob);
}

const nn::Tensor& features_for(const FeatureMap& features, const std::string& image_id) {
  auto it = features.find(image_id);
  if (it == features.end()) throw MissingImage(image_id);
  return it->second;
}

}  // namespace sf::io
