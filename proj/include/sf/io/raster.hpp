#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sf/core/types.hpp"
#include "sf/nn/tensor.hpp"

namespace sf::io {

/// 8-bit raster, interleaved rows (height x width x channels).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const Image&, const Image&) = default;
};

/// Reads binary PGM (P5) or PPM (P6) with maxval <= 255.
Image read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Image& img);

/// 16-bit PGM of a map scaled so its maximum is 65535.
void write_saliency_pgm(const std::filesystem::path& path, const SaliencyMap& map);
SaliencyMap read_saliency_pgm(const std::filesystem::path& path);

/// channels x H x W tensor with values in [0, 1].
nn::Tensor image_to_tensor(const Image& img);

}  // namespace sf::io
