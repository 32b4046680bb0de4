#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sf/models/discriminator.hpp"
#include "sf/models/generator.hpp"

namespace sf::training {

struct ModelConfig {
  models::GeneratorConfig generator;
  models::DiscriminatorConfig discriminator;
};

struct TrainConfig {
  int epochs = 246;
  std::int64_t max_steps = 0;  // > 0 overrides epochs
  double lr = 1e-4;            // 1e-5 suits long runs
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int batch_size = 16;
  int seq_len = 10;
  // Observer re-draw period in steps: 0 = once per epoch, < 0 = never.
  std::int64_t resample_period_steps = 0;
  std::uint64_t seed = 1;
  int d_steps_per_g_step = 1;
  double aux_mse_weight = 0.0;
  bool saturating = false;
  double clip_norm = 5.0;
  // Std of Gaussian noise added to both real and generated sequences before
  // they reach D (normalized coordinates). 0 disables it.
  double instance_noise = 0.0;
  std::int64_t checkpoint_every = 0;  // 0 = only the final checkpoint

  /// Throws sf::Error when a field is out of range.
  void validate() const;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  std::optional<std::string> features_path;  // encoder bypass
};

nlohmann::json to_json(const models::GeneratorConfig& c);
nlohmann::json to_json(const models::DiscriminatorConfig& c);
nlohmann::json to_json(const ModelConfig& c);
nlohmann::json to_json(const TrainConfig& c);
nlohmann::json to_json(const RunConfig& c);

// Missing keys keep their defaults; unknown keys are rejected with sf::Error.
models::GeneratorConfig generator_config_from_json(const nlohmann::json& j);
models::DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j);
ModelConfig model_config_from_json(const nlohmann::json& j);
TrainConfig train_config_from_json(const nlohmann::json& j);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace sf::training
