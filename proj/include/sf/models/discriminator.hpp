#pragma once

#include <cstdint>
#include <vector>

#include "sf/nn/adam.hpp"
#include "sf/nn/tape.hpp"

namespace sf::models {

struct DiscriminatorConfig {
  std::vector<int> branch_channels{16, 32, 64};  // per branch, input has 1 channel
  int kernel = 3;
  std::vector<int> fc_hidden{64, 32};  // input is 2 * branch_channels.back(), output 1
  double leaky_slope = 0.2;

  void validate() const;
};

struct Discrimination {
  nn::Var logit;
  nn::Var prob;
};

/// Two independent 1D-conv branches (one per coordinate axis), global max
/// pooling, concatenation, three fully connected layers, sigmoid.
class Discriminator {
 public:
  Discriminator(DiscriminatorConfig cfg, std::uint64_t seed);

  const DiscriminatorConfig& config() const noexcept { return cfg_; }

  /// x_seq and y_seq are length-L vectors. With track = false the
  /// discriminator acts as a fixed function (no parameter gradients).
  Discrimination forward(nn::Var x_seq, nn::Var y_seq, bool track = true);

  /// Probability that the sequence pair is real.
  double score(const std::vector<double>& xs, const std::vector<double>& ys);

  void for_each_parameter(const nn::ParameterVisitor& fn);

 private:
  struct Layer {
    nn::Parameter weight;
    nn::Parameter bias;
  };

  nn::Var branch(std::vector<Layer>& layers, nn::Var seq, bool track);

  DiscriminatorConfig cfg_;
  std::vector<Layer> branch_x_;
  std::vector<Layer> branch_y_;
  std::vector<Layer> fc_;
};

/// Total trainable scalar count of any model exposing for_each_parameter.
template <typename Model>
std::size_t count_parameters(Model& model) {
  std::size_t n = 0;
  model.for_each_parameter([&](nn::Parameter& p) {
    if (p.trainable) n += p.value.size();
  });
  return n;
}

}  // namespace sf::models
