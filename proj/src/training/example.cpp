#include "sf/training/example.hpp"

#include "sf/io/raster.hpp"

namespace sf::training {

std::vector<TrainingExample> make_examples(const std::vector<io::DatasetRecord>& records,
                                           const std::filesystem::path& base_dir,
                                           const models::GeneratorConfig& cfg, const io::FeatureMap* features) {
  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    TrainingExample ex;
    ex.image_id = rec.image_id;
    ex.pool = rec.pool();
    require_valid(ex.pool);
    if (features) {
      ex.input = io::features_for(*features, rec.image_id);
      const nn::Shape want{cfg.feature_channels(), cfg.feature_h(), cfg.feature_w()};
      if (ex.input.shape() != want)
        throw ShapeMismatch("features for '" + rec.image_id + "': got " + nn::shape_str(ex.input.shape()) +
                            ", model expects " + nn::shape_str(want));
      ex.is_features = true;
    } else {
      const io::Image img = io::load_record_image(rec, base_dir);
      if (img.width != cfg.image_w || img.height != cfg.image_h || img.channels != cfg.image_channels)
        throw ShapeMismatch("image '" + rec.image_id + "' is " + std::to_string(img.channels) + "x" +
                            std::to_string(img.height) + "x" + std::to_string(img.width) + ", model expects " +
                            std::to_string(cfg.image_channels) + "x" + std::to_string(cfg.image_h) + "x" +
                            std::to_string(cfg.image_w));
      ex.input = io::image_to_tensor(img);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace sf::training
