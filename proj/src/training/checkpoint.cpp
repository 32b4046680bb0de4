#include "sf/training/checkpoint.hpp"

#include "sf/io/blobfile.hpp"

namespace sf::training {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "scanpath-forge-checkpoint";
constexpr int kVersion = 1;

template <typename Model>
void put_model(io::BlobFile& blob, Model& model, const nn::Adam& opt, const std::string& tag) {
  model.for_each_parameter([&](nn::Parameter& p) { blob.entries.push_back({p.name, p.value}); });
  std::size_t k = 0;
  const auto& mo = opt.moments();
  model.for_each_parameter([&](nn::Parameter& p) {
    if (!p.trainable || k >= mo.size()) return;
    blob.entries.push_back({"opt." + tag + ".m." + p.name, mo[k].m});
    blob.entries.push_back({"opt." + tag + ".v." + p.name, mo[k].v});
    ++k;
  });
}

const nn::Tensor& need(const io::BlobFile& blob, const std::string& name, const nn::Shape& shape) {
  const auto* e = blob.find(name);
  if (!e) throw CorruptCheckpoint(name, "entry missing");
  if (e->tensor.shape() != shape)
    throw CorruptCheckpoint(name, "shape " + nn::shape_str(e->tensor.shape()) + " where the model expects " +
                                      nn::shape_str(shape));
  return e->tensor;
}

template <typename Model>
nn::Adam take_model(const io::BlobFile& blob, Model& model, const std::string& tag, std::int64_t t,
                    const nn::AdamConfig& cfg) {
  std::vector<nn::Adam::Moments> moments;
  bool has_moments = t > 0;
  model.for_each_parameter([&](nn::Parameter& p) {
    p.value = need(blob, p.name, p.value.shape());
    p.zero_grad();
    if (has_moments && p.trainable)
      moments.push_back({need(blob, "opt." + tag + ".m." + p.name, p.value.shape()),
                         need(blob, "opt." + tag + ".v." + p.name, p.value.shape())});
  });
  nn::Adam opt(cfg);
  opt.restore(t, std::move(moments));
  return opt;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointMeta& meta, models::Generator& gen,
                     models::Discriminator& disc, const nn::Adam& gen_opt, const nn::Adam& disc_opt) {
  io::BlobFile blob;
  blob.meta = {{"format", kFormat},
               {"version", kVersion},
               {"step", meta.step},
               {"model", to_json(meta.model)},
               {"train", to_json(meta.train)},
               {"adam", {{"gen_t", gen_opt.steps()}, {"disc_t", disc_opt.steps()}}}};
  put_model(blob, gen, gen_opt, "gen");
  put_model(blob, disc, disc_opt, "disc");
  io::write_blobfile(path, blob);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  io::BlobFile blob;
  try {
    blob = io::read_blobfile(path);
  } catch (const io::CorruptBlob& e) {
    throw CorruptCheckpoint(e.field(), e.what());
  }
  const json& m = blob.meta;
  auto field = [&](const char* key) -> const json& {
    if (!m.contains(key)) throw CorruptCheckpoint(std::string("meta.") + key, "missing");
    return m[key];
  };
  if (field("format") != kFormat) throw CorruptCheckpoint("meta.format", "not a scanpath-forge checkpoint");
  if (field("version") != kVersion) throw CorruptCheckpoint("meta.version", "unsupported version");

  CheckpointMeta meta;
  std::int64_t gen_t = 0, disc_t = 0;
  try {
    meta.step = field("step").get<std::int64_t>();
    meta.model = model_config_from_json(field("model"));
    meta.train = train_config_from_json(field("train"));
    gen_t = field("adam").at("gen_t").get<std::int64_t>();
    disc_t = field("adam").at("disc_t").get<std::int64_t>();
  } catch (const CorruptCheckpoint&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptCheckpoint("meta", e.what());
  }
  if (meta.step < 0 || gen_t < 0 || disc_t < 0) throw CorruptCheckpoint("meta.step", "negative counter");

  models::Generator gen(meta.model.generator, 0);
  models::Discriminator disc(meta.model.discriminator, 0);
  const auto cfg = nn::AdamConfig{meta.train.lr, meta.train.beta1, meta.train.beta2, meta.train.eps};
  nn::Adam gen_opt = take_model(blob, gen, "gen", gen_t, cfg);
  nn::Adam disc_opt = take_model(blob, disc, "disc", disc_t, cfg);
  return {std::move(meta), std::move(gen), std::move(disc), std::move(gen_opt), std::move(disc_opt)};
}

}  // namespace sf::training
