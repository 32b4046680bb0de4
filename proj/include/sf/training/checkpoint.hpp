#pragma once

#include <cstdint>
#include <filesystem>

#include "sf/models/discriminator.hpp"
#include "sf/models/generator.hpp"
#include "sf/nn/adam.hpp"
#include "sf/training/config.hpp"

namespace sf::training {

struct CheckpointMeta {
  ModelConfig model;
  TrainConfig train;
  std::int64_t step = 0;  // completed steps
};

struct Checkpoint {
  CheckpointMeta meta;
  models::Generator generator;
  models::Discriminator discriminator;
  nn::Adam generator_optimizer;
  nn::Adam discriminator_optimizer;
};

// Layout: a blob file whose meta holds {"format", "version", "step", "model",
// "train", "adam": {"gen_t", "disc_t"}}. Entries are every parameter by its
// path name (prior means included even when frozen), then
// "opt.gen.m.<name>", "opt.gen.v.<name>", "opt.disc.m.<name>", ... for each
// trainable parameter that has optimizer state.

/// Prior bank parameters are part of the generator. Throws IoError.
void save_checkpoint(const std::filesystem::path& path, const CheckpointMeta& meta, models::Generator& gen,
                     models::Discriminator& disc, const nn::Adam& gen_opt, const nn::Adam& disc_opt);

/// Throws IoError when unreadable, CorruptCheckpoint(field) otherwise.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sf::training
