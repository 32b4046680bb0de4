#include "sf/models/generator.hpp"

#include "sf/core/random.hpp"
#include "sf/nn/init.hpp"
#include "sf/nn/ops.hpp"

namespace sf::models {

namespace {

int halve(int n) { return (n + 1) / 2; }

}  // namespace

int GeneratorConfig::feature_h() const {
  int h = image_h;
  for (std::size_t i = 0; i < encoder_channels.size(); ++i) h = halve(h);
  return h;
}

int GeneratorConfig::feature_w() const {
  int w = image_w;
  for (std::size_t i = 0; i < encoder_channels.size(); ++i) w = halve(w);
  return w;
}

void GeneratorConfig::validate() const {
  if (image_h < 1 || image_w < 1 || image_channels < 1) throw ShapeMismatch("generator: empty image shape");
  if (encoder_kernel % 2 == 0 || fuse_kernel % 2 == 0 || head_kernel % 2 == 0)
    throw ShapeMismatch("generator: kernel sizes must be odd");
  for (int c : encoder_channels)
    if (c < 1) throw ShapeMismatch("generator: encoder channel counts must be positive");
  for (int c : head_channels)
    if (c < 1) throw ShapeMismatch("generator: head channel counts must be positive");
  if (fuse_channels < 1) throw ShapeMismatch("generator: fuse channels must be positive");
  if (seq_len < 2) throw ShapeMismatch("generator: sequence length must be >= 2");
}

Generator::Generator(GeneratorConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), bank_(priors::init_bank(cfg_.n_priors, cfg_.trainable_means, "gen.priors")) {
  cfg_.validate();
  Rng rng(mix_seed(seed, 0x67656e));
  const double a = cfg_.leaky_slope;
  const int k = cfg_.encoder_kernel;

  int c_in = cfg_.image_channels;
  for (std::size_t i = 0; i < cfg_.encoder_channels.size(); ++i) {
    const int c_out = cfg_.encoder_channels[i];
    const std::string base = "gen.encoder.block" + std::to_string(i) + ".";
    blocks_.push_back({nn::Parameter(base + "depthwise", nn::kaiming_uniform({c_in, 1, k, k}, k * k, a, rng)),
                       nn::Parameter(base + "pointwise", nn::kaiming_uniform({c_out, c_in, 1, 1}, c_in, a, rng))});
    c_in = c_out;
  }

  const int fused_in = cfg_.feature_channels() + cfg_.n_priors;
  const int fk = cfg_.fuse_kernel;
  fuse_ = {nn::Parameter("gen.fuse.weight",
                         nn::kaiming_uniform({cfg_.fuse_channels, fused_in, fk, fk}, fused_in * fk * fk, a, rng)),
           nn::Parameter("gen.fuse.bias", nn::Tensor({cfg_.fuse_channels}))};

  for (auto* head : {&head_x_, &head_y_}) {
    const std::string base = head == &head_x_ ? "gen.head_x.conv" : "gen.head_y.conv";
    std::vector<int> plan = cfg_.head_channels;
    plan.push_back(1);
    int ci = cfg_.fuse_channels + 1;
    const int hk = cfg_.head_kernel;
    for (std::size_t j = 0; j < plan.size(); ++j) {
      const std::string name = base + std::to_string(j + 1);
      head->push_back({nn::Parameter(name + ".weight", nn::kaiming_uniform({plan[j], ci, hk}, ci * hk, a, rng)),
                       nn::Parameter(name + ".bias", nn::Tensor({plan[j]}))});
      ci = plan[j];
    }
  }
}

void Generator::for_each_parameter(const nn::ParameterVisitor& fn) {
  for (auto& b : blocks_) {
    fn(b.depthwise);
    fn(b.pointwise);
  }
  bank_.for_each_parameter(fn);
  fn(fuse_.weight);
  fn(fuse_.bias);
  for (auto* head : {&head_x_, &head_y_})
    for (auto& c : *head) {
      fn(c.weight);
      fn(c.bias);
    }
}

nn::Var Generator::encoder(nn::Tape& tape, const nn::Tensor& image, bool track) {
  const nn::Shape expected{cfg_.image_channels, cfg_.image_h, cfg_.image_w};
  if (image.shape() != expected)
    throw ShapeMismatch("generator: image " + nn::shape_str(image.shape()) + " does not match configured " +
                        nn::shape_str(expected));
  nn::Var h = tape.constant(image);
  for (auto& b : blocks_)
    h = nn::depthwise_separable_block(h, tape.param(b.depthwise, track), tape.param(b.pointwise, track), 2,
                                      cfg_.leaky_slope);
  return h;
}

SequenceOutput Generator::head(nn::Tape& tape, nn::Var features, int length, bool track) {
  if (length < 2) throw ShapeMismatch("generator: scanpath length must be >= 2");
  const int fh = cfg_.feature_h(), fw = cfg_.feature_w();
  const double a = cfg_.leaky_slope;

  nn::Var pri = priors::render_bank(tape, bank_, fh, fw, track);
  const nn::Var parts[] = {features, pri};
  nn::Var fused = nn::concat(parts);
  fused = nn::add_channel_bias(nn::conv2d(fused, tape.param(fuse_.weight, track), 1), tape.param(fuse_.bias, track));
  fused = nn::leaky_relu(fused, a);

  nn::Var seq;
  if (cfg_.bridge == Bridge::SpatialMean) {
    seq = nn::tile(nn::spatial_mean(fused), length);
  } else {
    seq = nn::resample_columns(nn::reshape(fused, {cfg_.fuse_channels, fh * fw}), length);
  }
  nn::Tensor ramp({1, length});
  for (int t = 0; t < length; ++t) ramp[static_cast<std::size_t>(t)] = static_cast<double>(t) / (length - 1);
  const nn::Var seq_parts[] = {seq, tape.constant(std::move(ramp))};
  nn::Var seq_in = nn::concat(seq_parts);

  auto run = [&](std::vector<Conv>& layers) {
    nn::Var h = seq_in;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      h = nn::add_channel_bias(nn::conv1d(h, tape.param(layers[j].weight, track)),
                               tape.param(layers[j].bias, track));
      h = j + 1 < layers.size() ? nn::leaky_relu(h, a) : nn::sigmoid(h);
    }
    return nn::reshape(h, {length});
  };
  return {run(head_x_), run(head_y_)};
}

SequenceOutput Generator::forward(nn::Tape& tape, const nn::Tensor& image, int length, bool track) {
  return head(tape, encoder(tape, image, track), length, track);
}

SequenceOutput Generator::forward_features(nn::Tape& tape, const nn::Tensor& features, int length, bool track) {
  const nn::Shape expected{cfg_.feature_channels(), cfg_.feature_h(), cfg_.feature_w()};
  if (features.shape() != expected)
    throw ShapeMismatch("generator: features " + nn::shape_str(features.shape()) + " do not match configured " +
                        nn::shape_str(expected));
  return head(tape, tape.constant(features), length, track);
}

nn::Tensor Generator::encode(const nn::Tensor& image) {
  nn::Tape tape;
  return encoder(tape, image, false).value();
}

std::vector<NormalizedPoint> Generator::generate(const nn::Tensor& input, int length, bool is_features) {
  nn::Tape tape;
  SequenceOutput out = is_features ? forward_features(tape, input, length, false) : forward(tape, input, length, false);
  std::vector<NormalizedPoint> pts(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t)
    pts[static_cast<std::size_t>(t)] = {out.x.value()[static_cast<std::size_t>(t)], out.y.value()[static_cast<std::size_t>(t)]};
  return pts;
}

}  // namespace sf::models
