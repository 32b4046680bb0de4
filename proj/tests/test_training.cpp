#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "oracles.hpp"
#include "sf/io/blobfile.hpp"
#include "sf/io/synthetic.hpp"
#include "sf/nn/ops.hpp"
#include "sf/training/checkpoint.hpp"
#include "sf/training/losses.hpp"
#include "sf/training/sampler.hpp"
#include "sf/training/trainer.hpp"

using namespace sf;
using namespace sf::training;
namespace fs = std::filesystem;
using nn::Tape;
using nn::Tensor;
using nn::Var;

namespace {

// 16x16 images, two encoder blocks down to a 4x4 prior grid
ModelConfig small_model() {
  ModelConfig m;
  m.generator.image_h = 16;
  m.generator.image_w = 16;
  m.generator.encoder_channels = {8, 16};
  m.generator.n_priors = 4;
  m.generator.fuse_channels = 16;
  m.generator.head_channels = {8};
  m.discriminator.branch_channels = {8, 16};
  m.discriminator.fc_hidden = {16, 8};
  return m;
}

std::vector<TrainingExample> small_data(int n, std::uint64_t seed, int observers = 5) {
  io::SyntheticSpec spec;
  spec.image_size = 16;
  spec.saliency_size = 16;
  spec.n_observers = observers;
  auto ds = io::generate_synthetic(spec, n, seed);
  return make_examples(ds.records, {}, small_model().generator);
}

TrainConfig small_train() {
  TrainConfig tc;
  tc.batch_size = 4;
  tc.max_steps = 10;
  tc.lr = 1e-3;
  return tc;
}

template <typename Model>
std::vector<Tensor> snapshot(Model& m) {
  std::vector<Tensor> out;
  m.for_each_parameter([&](nn::Parameter& p) { out.push_back(p.value); });
  return out;
}

Scanpath path(std::vector<Fixation> f, std::string observer = "o") {
  Scanpath s;
  s.image_id = "img";
  s.observer_id = std::move(observer);
  s.screen_w = 100;
  s.screen_h = 100;
  s.fixations = std::move(f);
  return s;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sf_test_training_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("loss examples") {
  CHECK(d_loss(0.5, 0.5) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(d_loss(0.5, 0.5) == doctest::Approx(1.3863).epsilon(1e-4));
  CHECK(d_loss(0.9, 0.1) == doctest::Approx(0.2107).epsilon(1e-3));
  CHECK(d_loss(1.0 - 1e-12, 1e-12) < 1e-6);
  CHECK(g_loss(0.5) == doctest::Approx(0.6931).epsilon(1e-4));
  CHECK(g_loss(1.0) < 1e-6);
  CHECK(g_loss(0.5, true) == doctest::Approx(-0.6931).epsilon(1e-4));
  // clamping keeps every extreme finite
  for (double p : {0.0, 1.0, 1e-300})
    for (double q : {0.0, 1.0}) {
      CHECK(std::isfinite(d_loss(p, q)));
      CHECK(std::isfinite(g_loss(p)));
      CHECK(std::isfinite(g_loss(p, true)));
    }
  CHECK(d_loss(0.0, 1.0) == doctest::Approx(-2 * std::log(kProbClamp)));
}

TEST_CASE("tape losses agree with the scalar forms") {
  Tape t;
  Var a = t.constant(Tensor::scalar(0.7)), b = t.constant(Tensor::scalar(0.2));
  CHECK(d_loss(a, b).value()[0] == doctest::Approx(d_loss(0.7, 0.2)).epsilon(1e-14));
  CHECK(g_loss(b).value()[0] == doctest::Approx(g_loss(0.2)).epsilon(1e-14));
  CHECK(g_loss(b, true).value()[0] == doctest::Approx(g_loss(0.2, true)).epsilon(1e-14));
}

TEST_CASE("loss gradients through the discriminator pass finite differences") {
  const auto mc = small_model();
  models::Discriminator d(mc.discriminator, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  auto seq = [&] {
    Tensor t({6});
    for (auto& v : t.values()) v = u(rng);
    return t;
  };
  double e = oracle::gradient_check(
      [&](Tape&, const std::vector<Var>& v) {
        return d_loss(d.forward(v[0], v[1], false).prob, d.forward(v[2], v[3], false).prob);
      },
      {seq(), seq(), seq(), seq()}, 5, 1e-6);
  CHECK(e < 1e-3);
  for (bool sat : {false, true}) {
    e = oracle::gradient_check(
        [&](Tape&, const std::vector<Var>& v) { return g_loss(d.forward(v[0], v[1], false).prob, sat); },
        {seq(), seq()}, 6, 1e-6);
    CHECK(e < 1e-3);
  }
}

TEST_CASE("observer draws are uniform with period 1") {
  const std::uint64_t key = image_key("img_0003");
  std::vector<int> counts(5, 0);
  for (std::int64_t step = 0; step < 10000; ++step) ++counts[observer_index(5, key, step, 1, 17)];
  for (int c : counts) CHECK(std::abs(c / 10000.0 - 0.2) <= 0.02);
}

TEST_CASE("observer draws are held for the period") {
  const std::uint64_t key = image_key("a");
  for (std::int64_t block = 0; block < 50; ++block) {
    const auto first = observer_index(7, key, block * 4, 4, 1);
    for (int k = 1; k < 4; ++k) CHECK(observer_index(7, key, block * 4 + k, 4, 1) == first);
  }
  // period <= 0: one draw for the whole run
  const auto fixed = observer_index(7, key, 0, 0, 1);
  for (std::int64_t step = 0; step < 1000; step += 37) CHECK(observer_index(7, key, step, 0, 1) == fixed);
  // different images draw independently
  int differ = 0;
  for (int i = 0; i < 20; ++i)
    differ += observer_index(7, image_key("x" + std::to_string(i)), 0, 1, 1) != observer_index(7, key, 0, 1, 1);
  CHECK(differ > 5);
}

TEST_CASE("sample_real edge cases") {
  ObserverPool one{"img", {path({{1, 1}, {2, 2}}, "only")}};
  for (std::int64_t s = 0; s < 20; ++s) CHECK(sample_real(one, s, 1, 3, 2).observer_id == "only");
  CHECK_THROWS_AS(sample_real(ObserverPool{"img", {}}, 0, 1, 1, 5), EmptyPool);
  CHECK_THROWS_AS(observer_index(0, 1, 0, 1, 1), EmptyPool);
  CHECK(sample_real(one, 0, 1, 3, 6).fixations.size() == 6);
}

TEST_CASE("length harmonization") {
  auto sp = path({{0, 0}, {10, 20}, {30, 20}, {40, 40}, {50, 50}});
  auto t = harmonize_length(sp, 3);
  REQUIRE(t.fixations.size() == 3);
  CHECK(t.fixations[2].x == 30);

  CHECK(harmonize_length(sp, 5).fixations[3].y == 40);

  auto s = harmonize_length(path({{0, 0}, {10, 20}, {30, 20}}), 5);
  REQUIRE(s.fixations.size() == 5);
  CHECK(s.fixations[0].x == 0);
  CHECK(s.fixations[1].x == doctest::Approx(5));
  CHECK(s.fixations[1].y == doctest::Approx(10));
  CHECK(s.fixations[2].x == doctest::Approx(10));
  CHECK(s.fixations[3].x == doctest::Approx(20));
  CHECK(s.fixations[4].x == 30);
  CHECK(s.fixations[4].y == 20);

  auto single = harmonize_length(path({{7, 8}}), 4);
  for (const auto& f : single.fixations) {
    CHECK(f.x == 7);
    CHECK(f.y == 8);
  }
  CHECK_FALSE(validate_scanpath(s).has_value());
}

TEST_CASE("one step updates both networks and reports finite losses") {
  auto data = small_data(4, 1);
  Trainer tr(small_model(), small_train(), data);
  const auto g0 = snapshot(tr.generator()), d0 = snapshot(tr.discriminator());
  const auto r = tr.step();
  CHECK(r.step == 1);
  CHECK(std::isfinite(r.d_loss));
  CHECK(std::isfinite(r.g_loss));
  CHECK(r.d_real_acc >= 0.0);
  CHECK(r.d_real_acc <= 1.0);
  CHECK(r.d_fake_acc >= 0.0);
  CHECK(r.d_fake_acc <= 1.0);
  CHECK(snapshot(tr.generator()) != g0);
  CHECK(snapshot(tr.discriminator()) != d0);
  // the prior bank is part of the generator update
  CHECK(tr.generator().priors()[0].sigma_x() != doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("zero learning rate leaves parameters bitwise unchanged") {
  auto tc = small_train();
  tc.lr = 0.0;
  Trainer tr(small_model(), tc, small_data(4, 2));
  const auto g0 = snapshot(tr.generator()), d0 = snapshot(tr.discriminator());
  for (int i = 0; i < 3; ++i) {
    const auto r = tr.step();
    CHECK(std::isfinite(r.d_loss));
    CHECK(r.g_loss > 0.0);
  }
  CHECK(snapshot(tr.generator()) == g0);
  CHECK(snapshot(tr.discriminator()) == d0);
}

TEST_CASE("generator loss falls against a frozen perfect discriminator") {
  // toy rule: real scanpaths live in the right half of the screen
  auto oracle_d = [](Var x, Var) { return nn::sigmoid(nn::scale(nn::add_scalar(nn::mean(x), -0.5), 8.0)); };
  const auto mc = small_model();
  auto data = small_data(4, 3);
  std::vector<const TrainingExample*> batch;
  for (const auto& e : data) batch.push_back(&e);
  models::Generator gen(mc.generator, 1);
  models::Discriminator disc(mc.discriminator, 2);
  auto tc = small_train();
  nn::Adam go(adam_config(tc)), dopt(adam_config(tc));
  StepOptions opts;
  opts.frozen_discriminator = oracle_d;
  std::vector<double> losses;
  for (int s = 0; s < 100; ++s) losses.push_back(train_step(batch, s, 1, gen, disc, go, dopt, tc, opts).g_loss);
  int falling = 0;
  for (std::size_t i = 1; i < losses.size(); ++i) falling += losses[i] < losses[i - 1];
  CHECK(falling >= 90);
  CHECK(losses.back() < losses.front());
}

TEST_CASE("without the auxiliary term the real sample reaches G only through D") {
  const auto mc = small_model();
  auto data_a = small_data(4, 4);
  auto data_b = data_a;
  // same images, different observer scanpaths
  auto other = small_data(4, 5);
  for (std::size_t i = 0; i < data_b.size(); ++i) {
    data_b[i].pool = other[i].pool;
    data_b[i].pool.image_id = data_b[i].image_id;
    for (auto& sp : data_b[i].pool.scanpaths) sp.image_id = data_b[i].image_id;
  }
  auto run = [&](std::vector<TrainingExample>& data, double aux) {
    std::vector<const TrainingExample*> batch;
    for (const auto& e : data) batch.push_back(&e);
    models::Generator gen(mc.generator, 1);
    models::Discriminator disc(mc.discriminator, 2);
    auto tc = small_train();
    tc.aux_mse_weight = aux;
    nn::Adam go(adam_config(tc)), dopt(adam_config(tc));
    StepOptions opts;
    models::Discriminator frozen(mc.discriminator, 9);
    opts.frozen_discriminator = [&](Var x, Var y) { return frozen.forward(x, y, false).prob; };
    for (int s = 0; s < 3; ++s) train_step(batch, s, 1, gen, disc, go, dopt, tc, opts);
    return snapshot(gen);
  };
  CHECK(run(data_a, 0.0) == run(data_b, 0.0));
  CHECK(run(data_a, 1.0) != run(data_b, 1.0));
}

TEST_CASE("non-finite loss aborts with a diagnostic dump") {
  const auto dir = scratch("nonfinite");
  Trainer tr(small_model(), small_train(), small_data(4, 6));
  tr.set_dump_dir(dir);
  tr.discriminator().for_each_parameter([](nn::Parameter& p) {
    if (p.name == "disc.fc1.bias") p.value[0] = std::nan("");
  });
  try {
    tr.step();
    FAIL("expected NonFiniteLoss");
  } catch (const NonFiniteLoss& e) {
    REQUIRE(fs::exists(e.dump_path()));
    std::ifstream in(e.dump_path());
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("step") == 1);
    CHECK(j.at("stage") == "d_loss");
    CHECK(j.at("batch").size() == 4);
    CHECK(j.at("non_finite_parameters").dump().find("disc.fc1.bias") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("epoch schedule") {
  auto tc = small_train();
  tc.batch_size = 3;
  tc.max_steps = 0;
  tc.epochs = 2;
  Trainer tr(small_model(), tc, small_data(7, 7));
  CHECK(tr.steps_per_epoch() == 3);
  CHECK(tr.total_steps() == 6);
  CHECK(tr.resample_period() == 3);
  for (int epoch = 0; epoch < 2; ++epoch) {
    std::map<std::size_t, int> seen;
    for (int s = 0; s < 3; ++s)
      for (auto i : tr.batch_indices(epoch * 3 + s)) ++seen[i];
    CHECK(seen.size() == 7);
  }
  CHECK(tr.batch_indices(0) != tr.batch_indices(3));

  tc.resample_period_steps = -1;
  CHECK(Trainer(small_model(), tc, small_data(2, 7)).resample_period() == 0);
  tc.resample_period_steps = 5;
  CHECK(Trainer(small_model(), tc, small_data(2, 7)).resample_period() == 5);
}

TEST_CASE("checkpoint round trip restores forward outputs") {
  const auto dir = scratch("ckpt");
  auto data = small_data(4, 8);
  Trainer tr(small_model(), small_train(), data);
  tr.step();
  tr.step();
  tr.save(dir / "a.sfck");
  const auto ck = load_checkpoint(dir / "a.sfck");
  CHECK(ck.meta.step == 2);
  auto gen = ck.generator;
  const auto want = tr.generator().generate(data[0].input, 10);
  const auto got = gen.generate(data[0].input, 10);
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(got[i].u == want[i].u);
    CHECK(got[i].v == want[i].v);
  }
  CHECK(ck.generator_optimizer.steps() == 2);
  CHECK(ck.discriminator_optimizer.moments().size() == tr.discriminator_optimizer().moments().size());

  Trainer resumed(small_model(), small_train(), data);
  resumed.load(dir / "a.sfck");
  CHECK(resumed.steps_done() == 2);
  const auto r1 = tr.step(), r2 = resumed.step();
  CHECK(to_json(r1) == to_json(r2));

  auto other = small_model();
  other.generator.fuse_channels = 12;
  Trainer mismatch(other, small_train(), data);
  CHECK_THROWS_AS(mismatch.load(dir / "a.sfck"), CorruptCheckpoint);
  fs::remove_all(dir);
}

TEST_CASE("corrupt checkpoints are rejected with the field name") {
  const auto dir = scratch("corrupt");
  Trainer tr(small_model(), small_train(), small_data(4, 9));
  tr.step();
  tr.save(dir / "ok.sfck");
  std::ifstream in(dir / "ok.sfck", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});

  {
    std::ofstream(dir / "trunc.sfck", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
    CHECK_THROWS_AS(load_checkpoint(dir / "trunc.sfck"), CorruptCheckpoint);
  }
  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::ofstream(dir / "magic.sfck", std::ios::binary) << bad;
    try {
      load_checkpoint(dir / "magic.sfck");
      FAIL("expected CorruptCheckpoint");
    } catch (const CorruptCheckpoint& e) {
      CHECK(e.field() == "magic");
    }
  }
  {
    auto blob = io::read_blobfile(dir / "ok.sfck");
    std::erase_if(blob.entries, [](const io::BlobEntry& e) { return e.name == "gen.fuse.bias"; });
    io::write_blobfile(dir / "missing.sfck", blob);
    try {
      load_checkpoint(dir / "missing.sfck");
      FAIL("expected CorruptCheckpoint");
    } catch (const CorruptCheckpoint& e) {
      CHECK(e.field() == "gen.fuse.bias");
    }
  }
  {
    auto blob = io::read_blobfile(dir / "ok.sfck");
    blob.meta["format"] = "something-else";
    io::write_blobfile(dir / "format.sfck", blob);
    CHECK_THROWS_AS(load_checkpoint(dir / "format.sfck"), CorruptCheckpoint);
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "absent.sfck"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("config json round trip and strictness") {
  RunConfig rc;
  rc.model = small_model();
  rc.model.generator.bridge = models::Bridge::Flatten;
  rc.model.generator.trainable_means = true;
  rc.train.lr = 3e-4;
  rc.train.seed = 99;
  rc.train.saturating = true;
  rc.train.resample_period_steps = -1;
  const auto j = to_json(rc);
  const auto back = run_config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.model.generator.bridge == models::Bridge::Flatten);
  CHECK(back.train.seed == 99);

  // missing keys keep defaults
  const auto partial = train_config_from_json(nlohmann::json{{"lr", 0.5}});
  CHECK(partial.lr == 0.5);
  CHECK(partial.batch_size == TrainConfig{}.batch_size);

  CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"learning_rate", 0.1}}), Error);
  CHECK_THROWS_AS(generator_config_from_json(nlohmann::json{{"bridge", "sideways"}}), Error);
  CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"batch_size", 0}}), Error);
  CHECK_THROWS_AS(train_config_from_json(nlohmann::json{{"lr", -1.0}}), Error);
}
