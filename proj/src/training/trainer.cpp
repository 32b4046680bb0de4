#include "sf/training/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include "sf/core/random.hpp"
#include "sf/nn/ops.hpp"
#include "sf/training/checkpoint.hpp"
#include "sf/training/losses.hpp"
#include "sf/training/sampler.hpp"

namespace sf::training {

using nlohmann::json;

json to_json(const StepReport& r) {
  return {{"step", r.step},
          {"d_loss", r.d_loss},
          {"g_loss", r.g_loss},
          {"d_real_acc", r.d_real_acc},
          {"d_fake_acc", r.d_fake_acc}};
}

nn::AdamConfig adam_config(const TrainConfig& cfg) { return {cfg.lr, cfg.beta1, cfg.beta2, cfg.eps}; }

namespace {

struct RealSample {
  nn::Tensor x;
  nn::Tensor y;
};

RealSample real_sequences(const ObserverPool& pool, std::int64_t step, std::int64_t period, const TrainConfig& cfg) {
  const Scanpath sp = sample_real(pool, step, period, cfg.seed, cfg.seq_len);
  RealSample r{nn::Tensor({cfg.seq_len}), nn::Tensor({cfg.seq_len})};
  const auto pts = normalize_coords(sp);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r.x[i] = pts[i].u;
    r.y[i] = pts[i].v;
  }
  return r;
}

// Per-sample noise for D's inputs, reproducible from (seed, step, sample, stream).
nn::Tensor noise(const TrainConfig& cfg, std::int64_t step, std::size_t sample, std::uint64_t stream) {
  nn::Tensor t({cfg.seq_len}, 0.0);
  if (cfg.instance_noise <= 0.0) return t;
  Rng rng(mix_seed(mix_seed(mix_seed(cfg.seed, 0x6e6f697365ULL), static_cast<std::uint64_t>(step)),
                   sample * 4 + stream));
  for (double& v : t.values()) v = rng.normal(0.0, cfg.instance_noise);
  return t;
}

nn::Tensor plus(const nn::Tensor& a, const nn::Tensor& b) {
  nn::Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

template <typename Model>
void zero_grads(Model& m) {
  m.for_each_parameter([](nn::Parameter& p) { p.zero_grad(); });
}

template <typename Model>
auto visitor(Model& m) {
  return [&m](const nn::ParameterVisitor& fn) { m.for_each_parameter(fn); };
}

[[noreturn]] void fail_non_finite(const StepOptions& opts, std::int64_t step, const char* what, double d_loss,
                                  double g_loss, std::span<const TrainingExample* const> batch,
                                  models::Generator& gen, models::Discriminator& disc) {
  std::string path;
  if (!opts.dump_dir.empty()) {
    json dump{{"step", step + 1}, {"stage", what}, {"d_loss", d_loss}, {"g_loss", g_loss}};
    json ids = json::array();
    for (const auto* ex : batch) ids.push_back(ex->image_id);
    dump["batch"] = ids;
    json bad = json::array();
    auto scan = [&](nn::Parameter& p) {
      if (!p.value.all_finite() || !p.grad.all_finite()) bad.push_back(p.name);
    };
    gen.for_each_parameter(scan);
    disc.for_each_parameter(scan);
    dump["non_finite_parameters"] = bad;
    std::filesystem::create_directories(opts.dump_dir);
    const auto file = opts.dump_dir / ("nonfinite_step_" + std::to_string(step + 1) + ".json");
    std::ofstream out(file);
    out << dump.dump(2) << '\n';
    if (out) path = file.string();
  }
  throw NonFiniteLoss(std::string("non-finite ") + what + " at step " + std::to_string(step + 1), path);
}

}  // namespace

StepReport train_step(std::span<const TrainingExample* const> batch, std::int64_t step, std::int64_t period,
                      models::Generator& gen, models::Discriminator& disc, nn::Adam& gen_opt, nn::Adam& disc_opt,
                      const TrainConfig& cfg, const StepOptions& opts) {
  if (batch.empty()) throw EmptyInput("train_step: empty batch");
  const int L = cfg.seq_len;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::vector<RealSample> reals;
  reals.reserve(batch.size());
  for (const auto* ex : batch) reals.push_back(real_sequences(ex->pool, step, period, cfg));
  // Instance noise: streams 0/1 perturb the real x/y, 2/3 the fake x/y.
  std::vector<std::array<nn::Tensor, 4>> noises;
  for (std::size_t b = 0; b < batch.size(); ++b)
    noises.push_back({noise(cfg, step, b, 0), noise(cfg, step, b, 1), noise(cfg, step, b, 2), noise(cfg, step, b, 3)});

  // One generator pass per sample; the tapes stay alive for the G update.
  std::vector<std::unique_ptr<nn::Tape>> tapes;
  std::vector<models::SequenceOutput> fakes;
  for (const auto* ex : batch) {
    tapes.push_back(std::make_unique<nn::Tape>());
    auto& tape = *tapes.back();
    fakes.push_back(ex->is_features ? gen.forward_features(tape, ex->input, L, true)
                                    : gen.forward(tape, ex->input, L, true));
  }

  StepReport rep;
  rep.step = step + 1;

  if (opts.frozen_discriminator) {
    double d_sum = 0.0, real_hits = 0.0, fake_hits = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      nn::Tape tape;
      const double pr = opts.frozen_discriminator(tape.constant(reals[b].x), tape.constant(reals[b].y)).value()[0];
      const double pf = opts.frozen_discriminator(tape.constant(fakes[b].x.value()),
                                                  tape.constant(fakes[b].y.value())).value()[0];
      d_sum += d_loss(pr, pf);
      real_hits += pr > 0.5 ? 1.0 : 0.0;
      fake_hits += pf < 0.5 ? 1.0 : 0.0;
    }
    rep.d_loss = d_sum * inv_b;
    rep.d_real_acc = real_hits * inv_b;
    rep.d_fake_acc = fake_hits * inv_b;
  } else {
    for (int k = 0; k < cfg.d_steps_per_g_step; ++k) {
      zero_grads(disc);
      double d_sum = 0.0, real_hits = 0.0, fake_hits = 0.0;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        nn::Tape tape;
        const auto& nz = noises[b];
        auto real = disc.forward(tape.constant(plus(reals[b].x, nz[0])), tape.constant(plus(reals[b].y, nz[1])), true);
        auto fake = disc.forward(tape.constant(plus(fakes[b].x.value(), nz[2])),
                                 tape.constant(plus(fakes[b].y.value(), nz[3])), true);
        auto loss = nn::scale(d_loss(real.prob, fake.prob), inv_b);
        d_sum += loss.value()[0];
        real_hits += real.prob.value()[0] > 0.5 ? 1.0 : 0.0;
        fake_hits += fake.prob.value()[0] < 0.5 ? 1.0 : 0.0;
        tape.backward(loss);
      }
      if (k == 0) {
        rep.d_loss = d_sum;
        rep.d_real_acc = real_hits * inv_b;
        rep.d_fake_acc = fake_hits * inv_b;
      }
      if (!std::isfinite(d_sum)) fail_non_finite(opts, step, "d_loss", d_sum, 0.0, batch, gen, disc);
      if (cfg.clip_norm > 0.0) nn::clip_grad_norm(visitor(disc), cfg.clip_norm);
      disc_opt.step(visitor(disc));
    }
  }

  zero_grads(gen);
  double g_sum = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    auto& tape = *tapes[b];
    const auto& fake = fakes[b];
    nn::Var prob;
    if (opts.frozen_discriminator) {
      prob = opts.frozen_discriminator(fake.x, fake.y);
    } else if (cfg.instance_noise > 0.0) {
      const auto& nz = noises[b];
      prob = disc.forward(nn::add(fake.x, tape.constant(nz[2])), nn::add(fake.y, tape.constant(nz[3])), false).prob;
    } else {
      prob = disc.forward(fake.x, fake.y, false).prob;
    }
    nn::Var loss = g_loss(prob, cfg.saturating);
    g_sum += loss.value()[0] * inv_b;
    if (cfg.aux_mse_weight > 0.0) {
      nn::Var ex = nn::sub(fake.x, tape.constant(reals[b].x));
      nn::Var ey = nn::sub(fake.y, tape.constant(reals[b].y));
      nn::Var mse = nn::scale(nn::add(nn::mean(nn::square(ex)), nn::mean(nn::square(ey))), 0.5);
      loss = nn::add(loss, nn::scale(mse, cfg.aux_mse_weight));
    }
    tape.backward(nn::scale(loss, inv_b));
  }
  rep.g_loss = g_sum;
  if (!std::isfinite(g_sum)) fail_non_finite(opts, step, "g_loss", rep.d_loss, g_sum, batch, gen, disc);
  if (cfg.clip_norm > 0.0) nn::clip_grad_norm(visitor(gen), cfg.clip_norm);
  gen_opt.step(visitor(gen));
  gen.priors().clamp_means();
  return rep;
}

Trainer::Trainer(ModelConfig model, TrainConfig train, std::vector<TrainingExample> data)
    : model_(std::move(model)),
      train_(std::move(train)),
      data_(std::move(data)),
      gen_(model_.generator, mix_seed(train_.seed, 1)),
      disc_(model_.discriminator, mix_seed(train_.seed, 2)),
      gen_opt_(adam_config(train_)),
      disc_opt_(adam_config(train_)) {
  train_.validate();
  if (data_.empty()) throw EmptyInput("trainer: no training examples");
  for (const auto& ex : data_) require_valid(ex.pool);
}

std::int64_t Trainer::steps_per_epoch() const noexcept {
  const auto n = static_cast<std::int64_t>(data_.size());
  const auto b = static_cast<std::int64_t>(train_.batch_size);
  return (n + b - 1) / b;
}

std::int64_t Trainer::total_steps() const noexcept {
  if (train_.max_steps > 0) return train_.max_steps;
  return steps_per_epoch() * train_.epochs;
}

std::int64_t Trainer::resample_period() const noexcept {
  if (train_.resample_period_steps < 0) return 0;
  if (train_.resample_period_steps == 0) return steps_per_epoch();
  return train_.resample_period_steps;
}

std::vector<std::size_t> Trainer::batch_indices(std::int64_t step) const {
  const std::int64_t spe = steps_per_epoch();
  const std::int64_t epoch = step / spe;
  const std::int64_t pos = step % spe;
  std::vector<std::size_t> perm(data_.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(mix_seed(mix_seed(train_.seed, 0x65706f6368ULL), static_cast<std::uint64_t>(epoch)));
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const auto b = static_cast<std::size_t>(train_.batch_size);
  const auto begin = static_cast<std::size_t>(pos) * b;
  const auto end = std::min(begin + b, perm.size());
  return {perm.begin() + static_cast<std::ptrdiff_t>(begin), perm.begin() + static_cast<std::ptrdiff_t>(end)};
}

StepReport Trainer::step() {
  std::vector<const TrainingExample*> batch;
  for (std::size_t i : batch_indices(step_)) batch.push_back(&data_[i]);
  StepOptions opts;
  opts.dump_dir = dump_dir_;
  StepReport rep = train_step(batch, step_, resample_period(), gen_, disc_, gen_opt_, disc_opt_, train_, opts);
  ++step_;
  return rep;
}

void Trainer::save(const std::filesystem::path& path) {
  save_checkpoint(path, {model_, train_, step_}, gen_, disc_, gen_opt_, disc_opt_);
}

void Trainer::load(const std::filesystem::path& path) {
  Checkpoint ck = load_checkpoint(path);
  if (to_json(ck.meta.model) != to_json(model_))
    throw CorruptCheckpoint("meta.model", "model config differs from the running configuration");
  gen_ = std::move(ck.generator);
  disc_ = std::move(ck.discriminator);
  gen_opt_ = nn::Adam(adam_config(train_));
  gen_opt_.restore(ck.generator_optimizer.steps(), std::move(ck.generator_optimizer.moments()));
  disc_opt_ = nn::Adam(adam_config(train_));
  disc_opt_.restore(ck.discriminator_optimizer.steps(), std::move(ck.discriminator_optimizer.moments()));
  step_ = ck.meta.step;
}

}  // namespace sf::training
