#include "sf/io/blobfile.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace sf::io {

namespace {

constexpr char kMagic[8] = {'S', 'F', 'B', 'L', 'O', 'B', '0', '1'};

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffULL) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

const BlobEntry* BlobFile::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

void write_blobfile(const std::filesystem::path& path, const BlobFile& blob) {
  nlohmann::json header;
  header["meta"] = blob.meta;
  header["entries"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& e : blob.entries) {
    header["entries"].push_back({{"name", e.name}, {"shape", e.tensor.shape()}, {"offset", offset}});
    offset += e.tensor.size();
  }
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = to_le(text.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& e : blob.entries)
    for (double v : e.tensor.values()) {
      const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  if (!out) throw IoError("failed writing " + path.string());
}

BlobFile read_blobfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw CorruptBlob("magic", "missing file signature");
  std::uint64_t len = 0;
  std::memcpy(&len, bytes.data() + 8, sizeof len);
  len = to_le(len);
  if (len > bytes.size() - 16) throw CorruptBlob("header", "header length exceeds file size");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(len));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptBlob("header", e.what());
  }
  if (!header.contains("entries") || !header["entries"].is_array()) throw CorruptBlob("entries", "missing entry table");

  const std::size_t payload_at = 16 + static_cast<std::size_t>(len);
  const std::size_t payload_bytes = bytes.size() - payload_at;
  if (payload_bytes % 8 != 0) throw CorruptBlob("payload", "payload is not a whole number of float64 values");
  const std::uint64_t n_values = payload_bytes / 8;

  BlobFile blob;
  blob.meta = header.value("meta", nlohmann::json::object());
  std::uint64_t expected_total = 0;
  for (const auto& ej : header["entries"]) {
    std::string name;
    nn::Shape shape;
    std::uint64_t offset = 0;
    try {
      name = ej.at("name").get<std::string>();
      shape = ej.at("shape").get<nn::Shape>();
      offset = ej.at("offset").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw CorruptBlob("entries", e.what());
    }
    std::size_t count = 0;
    try {
      count = nn::shape_size(shape);
    } catch (const Error&) {
      throw CorruptBlob(name, "negative dimension");
    }
    if (offset > n_values || count > n_values - offset) throw CorruptBlob(name, "values run past the end of the file");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits = 0;
      std::memcpy(&bits, bytes.data() + payload_at + (offset + i) * 8, 8);
      values[i] = std::bit_cast<double>(to_le(bits));
    }
    blob.entries.push_back({name, nn::Tensor(std::move(shape), std::move(values))});
    expected_total += count;
  }
  if (expected_total != n_values) throw CorruptBlob("payload", "payload size does not match the entry table");
  return blob;
}

}  // namespace sf::io
