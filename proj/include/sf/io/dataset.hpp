#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sf/core/types.hpp"
#include "sf/io/raster.hpp"

namespace sf::io {

/// A bright Gaussian patch of a synthetic scene, in screen pixels.
struct Blob {
  double x = 0.0;
  double y = 0.0;
  double sigma = 1.0;
  double weight = 1.0;
  std::array<double, 3> color{1.0, 1.0, 1.0};
};

struct SyntheticScene {
  int image_size = 64;
  std::vector<Blob> blobs;
};

struct DatasetRecord {
  std::string image_id;
  std::optional<std::string> image_path;     // relative to the dataset file
  std::optional<SyntheticScene> synthetic;   // inline scene, rendered on demand
  std::optional<std::string> saliency_path;  // exact ground-truth map, if any
  int screen_w = 0;
  int screen_h = 0;
  std::vector<Scanpath> observers;

  ObserverPool pool() const { return {image_id, observers}; }
};

nlohmann::json scanpath_to_json(const Scanpath& sp);
/// Reads {"image_id", "observer_id", "screen_w", "screen_h", "fixations"}.
Scanpath scanpath_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const DatasetRecord& rec);
/// Throws ParseError for structural problems, ValidationError for invariant
/// violations; `line` is reported in both.
DatasetRecord record_from_json(const nlohmann::json& j, std::size_t line);

std::vector<DatasetRecord> parse_dataset(std::istream& in);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);

/// Loads the raster named by the record, or renders its inline scene.
Image load_record_image(const DatasetRecord& rec, const std::filesystem::path& base_dir);

struct SplitRatios {
  double train = 0.9;
  double val = 0.1;
  double test = 0.0;
};

struct DatasetSplit {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> val;
  std::vector<DatasetRecord> test;
};

/// Partitions by image_id (records sharing an id stay together), with a
/// seeded shuffle. Throws BadRatios unless the ratios are >= 0 and sum to 1.
DatasetSplit split(const std::vector<DatasetRecord>& records, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace sf::io
