#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sf/core/errors.hpp"
#include "sf/nn/tensor.hpp"

namespace sf::io {

// Container shared by checkpoints and feature dumps:
//
//   bytes 0..7    magic "SFBLOB01"
//   bytes 8..15   header length N, little-endian uint64
//   next N bytes  UTF-8 JSON header {"meta": {...}, "entries": [{"name", "shape", "offset"}...]}
//   remainder     float64 little-endian payload; entry values start at
//                 element `offset` and span product(shape) elements

class CorruptBlob : public Error {
 public:
  CorruptBlob(std::string field, const std::string& detail)
      : Error("corrupt blob file, field '" + field + "': " + detail), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct BlobEntry {
  std::string name;
  nn::Tensor tensor;
};

struct BlobFile {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<BlobEntry> entries;

  const BlobEntry* find(const std::string& name) const;
};

void write_blobfile(const std::filesystem::path& path, const BlobFile& blob);

/// Throws IoError when the file cannot be opened, CorruptBlob on any
/// structural problem (truncation, bad header, out-of-range entries).
BlobFile read_blobfile(const std::filesystem::path& path);

}  // namespace sf::io
