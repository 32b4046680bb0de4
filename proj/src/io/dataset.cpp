#include "sf/io/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "sf/core/random.hpp"
#include "sf/io/synthetic.hpp"

namespace sf::io {

using nlohmann::json;

namespace {

json fixations_to_json(const std::vector<Fixation>& fixations) {
  json arr = json::array();
  for (const auto& f : fixations) {
    json p = json::array({f.x, f.y});
    if (f.t_ms) p.push_back(*f.t_ms);
    arr.push_back(std::move(p));
  }
  return arr;
}

std::vector<Fixation> fixations_from_json(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("fixations must be an array");
  std::vector<Fixation> out;
  out.reserve(arr.size());
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() < 2 || p.size() > 3) throw std::invalid_argument("fixation must be [x, y] or [x, y, t]");
    Fixation f{p[0].get<double>(), p[1].get<double>(), std::nullopt};
    if (p.size() == 3) f.t_ms = p[2].get<double>();
    out.push_back(f);
  }
  return out;
}

}  // namespace

json scanpath_to_json(const Scanpath& sp) {
  return {{"image_id", sp.image_id},
          {"observer_id", sp.observer_id},
          {"screen_w", sp.screen_w},
          {"screen_h", sp.screen_h},
          {"fixations", fixations_to_json(sp.fixations)}};
}

Scanpath scanpath_from_json(const json& j) {
  try {
    Scanpath sp;
    sp.image_id = j.value("image_id", std::string{});
    sp.observer_id = j.value("observer_id", std::string{});
    sp.screen_w = j.at("screen_w").get<int>();
    sp.screen_h = j.at("screen_h").get<int>();
    sp.fixations = fixations_from_json(j.at("fixations"));
    return sp;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed scanpath: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("malformed scanpath: ") + e.what());
  }
}

json record_to_json(const DatasetRecord& rec) {
  json j;
  j["image_id"] = rec.image_id;
  if (rec.image_path) j["image"] = *rec.image_path;
  if (rec.saliency_path) j["saliency"] = *rec.saliency_path;
  j["screen_w"] = rec.screen_w;
  j["screen_h"] = rec.screen_h;
  if (rec.synthetic) {
    json blobs = json::array();
    for (const auto& b : rec.synthetic->blobs)
      blobs.push_back({{"x", b.x}, {"y", b.y}, {"sigma", b.sigma}, {"weight", b.weight}, {"color", b.color}});
    j["synthetic"] = {{"image_size", rec.synthetic->image_size}, {"blobs", std::move(blobs)}};
  }
  json obs = json::array();
  for (const auto& sp : rec.observers)
    obs.push_back({{"observer_id", sp.observer_id}, {"fixations", fixations_to_json(sp.fixations)}});
  j["observers"] = std::move(obs);
  return j;
}

DatasetRecord record_from_json(const json& j, std::size_t line) {
  DatasetRecord rec;
  try {
    if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
    rec.image_id = j.at("image_id").get<std::string>();
    if (j.contains("image")) rec.image_path = j["image"].get<std::string>();
    if (j.contains("saliency")) rec.saliency_path = j["saliency"].get<std::string>();
    rec.screen_w = j.at("screen_w").get<int>();
    rec.screen_h = j.at("screen_h").get<int>();
    if (j.contains("synthetic")) {
      const auto& s = j["synthetic"];
      SyntheticScene scene;
      scene.image_size = s.at("image_size").get<int>();
      for (const auto& b : s.at("blobs"))
        scene.blobs.push_back({b.at("x").get<double>(), b.at("y").get<double>(), b.at("sigma").get<double>(),
                               b.value("weight", 1.0), b.value("color", std::array<double, 3>{1.0, 1.0, 1.0})});
      rec.synthetic = std::move(scene);
    }
    for (const auto& o : j.at("observers")) {
      Scanpath sp;
      sp.image_id = rec.image_id;
      sp.observer_id = o.at("observer_id").get<std::string>();
      sp.screen_w = rec.screen_w;
      sp.screen_h = rec.screen_h;
      sp.fixations = fixations_from_json(o.at("fixations"));
      rec.observers.push_back(std::move(sp));
    }
  } catch (const json::exception& e) {
    throw ParseError(line, e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }

  if (rec.observers.empty()) throw ValidationError(line, "record has no observers");
  if (!rec.image_path && !rec.synthetic) throw ValidationError(line, "record names neither an image nor a synthetic scene");
  for (const auto& sp : rec.observers)
    if (auto err = validate_scanpath(sp)) throw ValidationError(line, "observer '" + sp.observer_id + "': " + err->message());
  return rec;
}

std::vector<DatasetRecord> parse_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(line, e.what());
    }
    out.push_back(record_from_json(j, line));
  }
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_dataset(in);
}

void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write dataset " + path.string());
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

Image load_record_image(const DatasetRecord& rec, const std::filesystem::path& base_dir) {
  if (rec.image_path) {
    const std::filesystem::path p = base_dir / *rec.image_path;
    if (std::filesystem::exists(p) || !rec.synthetic) return read_pnm(p);
  }
  if (rec.synthetic) return render_scene(*rec.synthetic, rec.screen_w, rec.screen_h);
  throw IoError("record '" + rec.image_id + "' has no image");
}

DatasetSplit split(const std::vector<DatasetRecord>& records, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
      std::fabs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw BadRatios("split ratios must be nonnegative and sum to 1");

  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = groups.try_emplace(records[i].image_id);
    if (inserted) ids.push_back(records[i].image_id);
    it->second.push_back(i);
  }
  Rng rng(mix_seed(seed, 0x73706c6974));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);

  const std::size_t n = ids.size();
  const std::size_t n_train = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(ratios.train * n)));
  const std::size_t n_val = std::min<std::size_t>(n - n_train, static_cast<std::size_t>(std::llround(ratios.val * n)));

  DatasetSplit out;
  for (std::size_t k = 0; k < n; ++k) {
    auto& dst = k < n_train ? out.train : (k < n_train + n_val ? out.val : out.test);
    for (std::size_t idx : groups[ids[k]]) dst.push_back(records[idx]);
  }
  return out;
}

}  // namespace sf::io
