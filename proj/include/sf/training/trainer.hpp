#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "sf/models/discriminator.hpp"
#include "sf/models/generator.hpp"
#include "sf/nn/adam.hpp"
#include "sf/training/config.hpp"
#include "sf/training/example.hpp"

namespace sf::training {

struct StepReport {
  std::int64_t step = 0;  // 1-based count of completed steps
  double d_loss = 0.0;
  double g_loss = 0.0;
  double d_real_acc = 0.0;
  double d_fake_acc = 0.0;
};

nlohmann::json to_json(const StepReport& r);

nn::AdamConfig adam_config(const TrainConfig& cfg);

/// Optional hooks for a single step.
struct StepOptions {
  /// Where to write the diagnostic dump on NonFiniteLoss; empty = no dump.
  std::filesystem::path dump_dir;
  /// Replaces the discriminator during the generator update (fixed oracle).
  /// Receives the generated x and y sequences and returns D(fake) on the
  /// tape; the trainable discriminator is then left untouched.
  std::function<nn::Var(nn::Var x_seq, nn::Var y_seq)> frozen_discriminator;
};

/// One adversarial update on a batch. `step` is the 0-based global step (it
/// drives the observer draw); `period` is the resolved resample period.
/// D: real (sampled observer) vs. detached fake, d_loss, Adam on D.
/// G: fake through the updated D, g_loss (+ aux MSE), Adam on G.
/// Gradients are batch means, clipped to cfg.clip_norm per network.
/// Throws NonFiniteLoss.
StepReport train_step(std::span<const TrainingExample* const> batch, std::int64_t step, std::int64_t period,
                      models::Generator& gen, models::Discriminator& disc, nn::Adam& gen_opt, nn::Adam& disc_opt,
                      const TrainConfig& cfg, const StepOptions& opts = {});

/// Owns the models, optimizers and schedule for a full run.
class Trainer {
 public:
  Trainer(ModelConfig model, TrainConfig train, std::vector<TrainingExample> data);

  const ModelConfig& model_config() const noexcept { return model_; }
  const TrainConfig& train_config() const noexcept { return train_; }

  std::int64_t steps_per_epoch() const noexcept;
  std::int64_t total_steps() const noexcept;
  std::int64_t steps_done() const noexcept { return step_; }
  bool finished() const noexcept { return step_ >= total_steps(); }
  /// Observer re-draw period in steps; 0 means never.
  std::int64_t resample_period() const noexcept;

  /// Example indices of the batch at 0-based `step`.
  std::vector<std::size_t> batch_indices(std::int64_t step) const;

  StepReport step();

  void set_dump_dir(std::filesystem::path dir) { dump_dir_ = std::move(dir); }

  models::Generator& generator() noexcept { return gen_; }
  models::Discriminator& discriminator() noexcept { return disc_; }
  nn::Adam& generator_optimizer() noexcept { return gen_opt_; }
  nn::Adam& discriminator_optimizer() noexcept { return disc_opt_; }
  const std::vector<TrainingExample>& data() const noexcept { return data_; }

  void save(const std::filesystem::path& path);
  /// Restores parameters, optimizer state and step count. The checkpoint
  /// must have been written with the same model config.
  void load(const std::filesystem::path& path);

 private:
  ModelConfig model_;
  TrainConfig train_;
  std::vector<TrainingExample> data_;
  models::Generator gen_;
  models::Discriminator disc_;
  nn::Adam gen_opt_;
  nn::Adam disc_opt_;
  std::int64_t step_ = 0;
  std::filesystem::path dump_dir_;
};

}  // namespace sf::training
