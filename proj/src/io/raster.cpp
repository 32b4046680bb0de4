#include "sf/io/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace sf::io {

namespace {

int read_header_int(std::istream& in, const std::string& where) {
  int c = in.peek();
  while (in && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else {
      in.get();
    }
    c = in.peek();
  }
  int v = 0;
  if (!(in >> v)) throw IoError("malformed PNM header in " + where);
  return v;
}

struct PnmHeader {
  int magic;  // 5 or 6
  int width, height, maxval;
};

PnmHeader read_header(std::istream& in, const std::string& where) {
  char p = 0, d = 0;
  in.get(p);
  in.get(d);
  if (p != 'P' || (d != '5' && d != '6')) throw IoError(where + " is not a binary PGM/PPM file");
  PnmHeader h{d - '0', 0, 0, 0};
  h.width = read_header_int(in, where);
  h.height = read_header_int(in, where);
  h.maxval = read_header_int(in, where);
  in.get();  // single whitespace before the raster
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535)
    throw IoError("unsupported PNM dimensions in " + where);
  return h;
}

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  const auto h = read_header(in, path.string());
  if (h.maxval > 255) throw IoError(path.string() + ": only 8-bit images are supported");
  Image img{h.width, h.height, h.magic == 6 ? 3 : 1, {}};
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw IoError(path.string() + ": truncated raster");
  return img;
}

void write_pnm(const std::filesystem::path& path, const Image& img) {
  if (img.channels != 1 && img.channels != 3) throw IoError("write_pnm: channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image " + path.string());
  out << (img.channels == 3 ? "P6" : "P5") << '\n' << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void write_saliency_pgm(const std::filesystem::path& path, const SaliencyMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write saliency map " + path.string());
  out << "P5\n" << map.width << ' ' << map.height << "\n65535\n";
  double mx = 0.0;
  for (double v : map.values) mx = std::max(mx, v);
  for (double v : map.values) {
    const auto q = static_cast<unsigned>(std::lround(mx > 0.0 ? 65535.0 * v / mx : 0.0));
    const char bytes[2] = {static_cast<char>((q >> 8) & 0xff), static_cast<char>(q & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

SaliencyMap read_saliency_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open saliency map " + path.string());
  const auto h = read_header(in, path.string());
  if (h.magic != 5) throw IoError(path.string() + ": saliency maps must be PGM");
  SaliencyMap m(h.width, h.height);
  const bool wide = h.maxval > 255;
  for (auto& v : m.values) {
    unsigned char b[2] = {0, 0};
    in.read(reinterpret_cast<char*>(b), wide ? 2 : 1);
    if (!in) throw IoError(path.string() + ": truncated raster");
    const unsigned q = wide ? (static_cast<unsigned>(b[0]) << 8) | b[1] : b[0];
    v = static_cast<double>(q) / h.maxval;
  }
  return m;
}

nn::Tensor image_to_tensor(const Image& img) {
  nn::Tensor t({img.channels, img.height, img.width});
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c)
      for (int ch = 0; ch < img.channels; ++ch)
        t[(static_cast<std::size_t>(ch) * img.height + r) * img.width + c] =
            img.pixels[(static_cast<std::size_t>(r) * img.width + c) * img.channels + ch] / 255.0;
  return t;
}

}  // namespace sf::io
