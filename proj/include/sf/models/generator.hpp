#pragma once

#include <cstdint>
#include <vector>

#include "sf/core/types.hpp"
#include "sf/nn/adam.hpp"
#include "sf/nn/tape.hpp"
#include "sf/priors/prior_bank.hpp"

namespace sf::models {

/// How the fused 2D feature map becomes a length-L sequence.
enum class Bridge {
  SpatialMean,  // average over space, tile across L, append a position ramp
  Flatten,      // raster-order spatial sequence resampled to L, plus the ramp
};

struct GeneratorConfig {
  int image_h = 64;
  int image_w = 64;
  int image_channels = 3;
  std::vector<int> encoder_channels{16, 32, 64};  // one stride-2 block each
  int encoder_kernel = 3;
  int n_priors = 16;
  int fuse_channels = 64;
  int fuse_kernel = 3;
  int seq_len = 10;
  std::vector<int> head_channels{32, 16};  // final 1-channel layer implied
  int head_kernel = 3;
  double leaky_slope = 0.2;
  Bridge bridge = Bridge::SpatialMean;
  bool trainable_means = false;

  int feature_channels() const { return encoder_channels.empty() ? image_channels : encoder_channels.back(); }
  int feature_h() const;
  int feature_w() const;
  /// Throws ShapeMismatch when the plan is inconsistent.
  void validate() const;
};

struct SequenceOutput {
  nn::Var x;  // L normalized horizontal coordinates
  nn::Var y;  // L normalized vertical coordinates
};

class Generator {
 public:
  Generator(GeneratorConfig cfg, std::uint64_t seed);

  const GeneratorConfig& config() const noexcept { return cfg_; }

  /// image is channels x H x W with values in [0, 1].
  SequenceOutput forward(nn::Tape& tape, const nn::Tensor& image, int length, bool track = true);

  /// Encoder bypass: `features` replaces the encoder output
  /// (feature_channels x feature_h x feature_w).
  SequenceOutput forward_features(nn::Tape& tape, const nn::Tensor& features, int length, bool track = true);

  /// Encoder output for one image, without gradients.
  nn::Tensor encode(const nn::Tensor& image);

  /// Normalized scanpath for an image (or features when `is_features`).
  std::vector<NormalizedPoint> generate(const nn::Tensor& input, int length, bool is_features = false);

  priors::PriorBank& priors() noexcept { return bank_; }
  const priors::PriorBank& priors() const noexcept { return bank_; }

  void for_each_parameter(const nn::ParameterVisitor& fn);

 private:
  struct Block {
    nn::Parameter depthwise;
    nn::Parameter pointwise;
  };
  struct Conv {
    nn::Parameter weight;
    nn::Parameter bias;
  };

  nn::Var encoder(nn::Tape& tape, const nn::Tensor& image, bool track);
  SequenceOutput head(nn::Tape& tape, nn::Var features, int length, bool track);

  GeneratorConfig cfg_;
  std::vector<Block> blocks_;
  priors::PriorBank bank_;
  Conv fuse_;
  std::vector<Conv> head_x_;
  std::vector<Conv> head_y_;
};

}  // namespace sf::models
