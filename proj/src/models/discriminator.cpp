#include "sf/models/discriminator.hpp"

#include "sf/core/errors.hpp"
#include "sf/core/random.hpp"
#include "sf/nn/init.hpp"
#include "sf/nn/ops.hpp"

namespace sf::models {

void DiscriminatorConfig::validate() const {
  if (branch_channels.empty()) throw ShapeMismatch("discriminator: branch needs at least one conv layer");
  if (kernel % 2 == 0) throw ShapeMismatch("discriminator: kernel size must be odd");
  for (int c : branch_channels)
    if (c < 1) throw ShapeMismatch("discriminator: channel counts must be positive");
  for (int c : fc_hidden)
    if (c < 1) throw ShapeMismatch("discriminator: layer widths must be positive");
}

Discriminator::Discriminator(DiscriminatorConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
  cfg_.validate();
  Rng rng(mix_seed(seed, 0x646973));
  const double a = cfg_.leaky_slope;
  for (auto* br : {&branch_x_, &branch_y_}) {
    const std::string base = br == &branch_x_ ? "disc.branch_x.conv" : "disc.branch_y.conv";
    int ci = 1;
    for (std::size_t j = 0; j < cfg_.branch_channels.size(); ++j) {
      const int co = cfg_.branch_channels[j];
      const std::string name = base + std::to_string(j + 1);
      br->push_back({nn::Parameter(name + ".weight", nn::kaiming_uniform({co, ci, cfg_.kernel}, ci * cfg_.kernel, a, rng)),
                     nn::Parameter(name + ".bias", nn::Tensor({co}))});
      ci = co;
    }
  }
  std::vector<int> plan = cfg_.fc_hidden;
  plan.push_back(1);
  int ni = 2 * cfg_.branch_channels.back();
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const std::string name = "disc.fc" + std::to_string(k + 1);
    fc_.push_back({nn::Parameter(name + ".weight", nn::kaiming_uniform({plan[k], ni}, ni, a, rng)),
                   nn::Parameter(name + ".bias", nn::Tensor({plan[k]}))});
    ni = plan[k];
  }
}

void Discriminator::for_each_parameter(const nn::ParameterVisitor& fn) {
  for (auto* group : {&branch_x_, &branch_y_, &fc_})
    for (auto& l : *group) {
      fn(l.weight);
      fn(l.bias);
    }
}

nn::Var Discriminator::branch(std::vector<Layer>& layers, nn::Var seq, bool track) {
  nn::Tape& tape = *seq.tape;
  const int L = seq.shape()[0];
  nn::Var h = nn::reshape(seq, {1, L});
  for (auto& l : layers)
    h = nn::leaky_relu(nn::add_channel_bias(nn::conv1d(h, tape.param(l.weight, track)), tape.param(l.bias, track)),
                       cfg_.leaky_slope);
  return nn::global_max_pool_1d(h);
}

Discrimination Discriminator::forward(nn::Var x_seq, nn::Var y_seq, bool track) {
  if (x_seq.shape().size() != 1 || y_seq.shape().size() != 1)
    throw ShapeMismatch("discriminator: coordinate sequences must be vectors");
  if (x_seq.shape()[0] != y_seq.shape()[0])
    throw LengthMismatch("discriminator: x has " + std::to_string(x_seq.shape()[0]) + " entries, y has " +
                         std::to_string(y_seq.shape()[0]));
  if (x_seq.shape()[0] < 2) throw ShapeMismatch("discriminator: sequences need length >= 2");
  nn::Tape& tape = *x_seq.tape;
  const nn::Var parts[] = {branch(branch_x_, x_seq, track), branch(branch_y_, y_seq, track)};
  nn::Var h = nn::concat(parts);
  for (std::size_t k = 0; k < fc_.size(); ++k) {
    h = nn::dense(h, tape.param(fc_[k].weight, track), tape.param(fc_[k].bias, track));
    if (k + 1 < fc_.size()) h = nn::leaky_relu(h, cfg_.leaky_slope);
  }
  return {h, nn::sigmoid(h)};
}

double Discriminator::score(const std::vector<double>& xs, const std::vector<double>& ys) {
  nn::Tape tape;
  const int L = static_cast<int>(xs.size());
  auto d = forward(tape.constant(nn::Tensor({L}, xs)), tape.constant(nn::Tensor({static_cast<int>(ys.size())}, ys)), false);
  return d.prob.value()[0];
}

}  // namespace sf::models
