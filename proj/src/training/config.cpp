#include "sf/training/config.hpp"

#include <set>

namespace sf::training {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw Error(std::string(where) + ": expected a JSON object");
  std::set<std::string> k(known.begin(), known.end());
  for (const auto& [key, _] : j.items())
    if (!k.count(key)) throw Error(std::string(where) + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(std::string("config key '") + key + "': " + e.what());
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1 && max_steps < 1) throw Error("train config: need epochs >= 1 or max_steps >= 1");
  if (max_steps < 0) throw Error("train config: max_steps must be >= 0");
  if (!(lr >= 0.0)) throw Error("train config: lr must be >= 0");
  if (batch_size < 1) throw Error("train config: batch_size must be >= 1");
  if (seq_len < 2) throw Error("train config: seq_len must be >= 2");
  if (d_steps_per_g_step < 1) throw Error("train config: d_steps_per_g_step must be >= 1");
  if (!(aux_mse_weight >= 0.0)) throw Error("train config: aux_mse_weight must be >= 0");
  if (!(clip_norm >= 0.0)) throw Error("train config: clip_norm must be >= 0");
  if (!(instance_noise >= 0.0)) throw Error("train config: instance_noise must be >= 0");
  if (checkpoint_every < 0) throw Error("train config: checkpoint_every must be >= 0");
}

json to_json(const models::GeneratorConfig& c) {
  return {{"image_h", c.image_h},
          {"image_w", c.image_w},
          {"image_channels", c.image_channels},
          {"encoder_channels", c.encoder_channels},
          {"encoder_kernel", c.encoder_kernel},
          {"n_priors", c.n_priors},
          {"fuse_channels", c.fuse_channels},
          {"fuse_kernel", c.fuse_kernel},
          {"seq_len", c.seq_len},
          {"head_channels", c.head_channels},
          {"head_kernel", c.head_kernel},
          {"leaky_slope", c.leaky_slope},
          {"bridge", c.bridge == models::Bridge::Flatten ? "flatten" : "mean"},
          {"trainable_means", c.trainable_means}};
}

json to_json(const models::DiscriminatorConfig& c) {
  return {{"branch_channels", c.branch_channels},
          {"kernel", c.kernel},
          {"fc_hidden", c.fc_hidden},
          {"leaky_slope", c.leaky_slope}};
}

json to_json(const ModelConfig& c) { return {{"generator", to_json(c.generator)}, {"discriminator", to_json(c.discriminator)}}; }

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"max_steps", c.max_steps},
          {"lr", c.lr},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"eps", c.eps},
          {"batch_size", c.batch_size},
          {"seq_len", c.seq_len},
          {"resample_period_steps", c.resample_period_steps},
          {"seed", c.seed},
          {"d_steps_per_g_step", c.d_steps_per_g_step},
          {"aux_mse_weight", c.aux_mse_weight},
          {"saturating", c.saturating},
          {"clip_norm", c.clip_norm},
          {"instance_noise", c.instance_noise},
          {"checkpoint_every", c.checkpoint_every}};
}

json to_json(const RunConfig& c) {
  json j{{"model", to_json(c.model)}, {"train", to_json(c.train)}};
  if (c.features_path) j["features"] = *c.features_path;
  return j;
}

models::GeneratorConfig generator_config_from_json(const json& j) {
  reject_unknown(j,
                 {"image_h", "image_w", "image_channels", "encoder_channels", "encoder_kernel", "n_priors",
                  "fuse_channels", "fuse_kernel", "seq_len", "head_channels", "head_kernel", "leaky_slope", "bridge",
                  "trainable_means"},
                 "generator config");
  models::GeneratorConfig c;
  read(j, "image_h", c.image_h);
  read(j, "image_w", c.image_w);
  read(j, "image_channels", c.image_channels);
  read(j, "encoder_channels", c.encoder_channels);
  read(j, "encoder_kernel", c.encoder_kernel);
  read(j, "n_priors", c.n_priors);
  read(j, "fuse_channels", c.fuse_channels);
  read(j, "fuse_kernel", c.fuse_kernel);
  read(j, "seq_len", c.seq_len);
  read(j, "head_channels", c.head_channels);
  read(j, "head_kernel", c.head_kernel);
  read(j, "leaky_slope", c.leaky_slope);
  read(j, "trainable_means", c.trainable_means);
  std::string bridge = "mean";
  read(j, "bridge", bridge);
  if (bridge == "mean")
    c.bridge = models::Bridge::SpatialMean;
  else if (bridge == "flatten")
    c.bridge = models::Bridge::Flatten;
  else
    throw Error("generator config: bridge must be \"mean\" or \"flatten\"");
  c.validate();
  return c;
}

models::DiscriminatorConfig discriminator_config_from_json(const json& j) {
  reject_unknown(j, {"branch_channels", "kernel", "fc_hidden", "leaky_slope"}, "discriminator config");
  models::DiscriminatorConfig c;
  read(j, "branch_channels", c.branch_channels);
  read(j, "kernel", c.kernel);
  read(j, "fc_hidden", c.fc_hidden);
  read(j, "leaky_slope", c.leaky_slope);
  c.validate();
  return c;
}

ModelConfig model_config_from_json(const json& j) {
  reject_unknown(j, {"generator", "discriminator"}, "model config");
  ModelConfig c;
  if (j.contains("generator")) c.generator = generator_config_from_json(j["generator"]);
  if (j.contains("discriminator")) c.discriminator = discriminator_config_from_json(j["discriminator"]);
  return c;
}

TrainConfig train_config_from_json(const json& j) {
  reject_unknown(j,
                 {"epochs", "max_steps", "lr", "beta1", "beta2", "eps", "batch_size", "seq_len",
                  "resample_period_steps", "seed", "d_steps_per_g_step", "aux_mse_weight", "saturating", "clip_norm",
                  "instance_noise", "checkpoint_every"},
                 "train config");
  TrainConfig c;
  read(j, "epochs", c.epochs);
  read(j, "max_steps", c.max_steps);
  read(j, "lr", c.lr);
  read(j, "beta1", c.beta1);
  read(j, "beta2", c.beta2);
  read(j, "eps", c.eps);
  read(j, "batch_size", c.batch_size);
  read(j, "seq_len", c.seq_len);
  read(j, "resample_period_steps", c.resample_period_steps);
  read(j, "seed", c.seed);
  read(j, "d_steps_per_g_step", c.d_steps_per_g_step);
  read(j, "aux_mse_weight", c.aux_mse_weight);
  read(j, "saturating", c.saturating);
  read(j, "clip_norm", c.clip_norm);
  read(j, "instance_noise", c.instance_noise);
  read(j, "checkpoint_every", c.checkpoint_every);
  c.validate();
  return c;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j, {"model", "train", "features"}, "config");
  RunConfig c;
  if (j.contains("model")) c.model = model_config_from_json(j["model"]);
  if (j.contains("train")) c.train = train_config_from_json(j["train"]);
  if (j.contains("features")) c.features_path = j["features"].get<std::string>();
  return c;
}

}  // namespace sf::training
