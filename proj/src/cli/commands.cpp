#include "sf/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sf/eval/evaluate.hpp"
#include "sf/io/dataset.hpp"
#include "sf/io/features.hpp"
#include "sf/io/raster.hpp"
#include "sf/io/svg.hpp"
#include "sf/io/synthetic.hpp"
#include "sf/metrics/multimatch.hpp"
#include "sf/training/checkpoint.hpp"
#include "sf/training/trainer.hpp"

namespace sf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Failures the operator can fix by changing flags or inputs they typed.
struct UsageError : Error {
  using Error::Error;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

/// Accepts the dataset file itself or a directory containing dataset.jsonl.
fs::path dataset_file(const fs::path& p) {
  if (fs::is_directory(p)) return p / "dataset.jsonl";
  return p;
}

std::vector<io::DatasetRecord> load_nonempty(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("dataset not found: " + path.string());
  auto records = io::load_dataset(path);
  if (records.empty()) throw EmptyInput("dataset is empty: " + path.string());
  return records;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  int images = 20;
  int observers = 15;
  std::uint64_t seed = 1;
  std::string out;
  int blobs = 2;
  int min_fixations = 10;
  int max_fixations = 15;
  double obs_sigma = 0.015;
  int screen = 128;
  int image_size = 64;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.images < 1) throw UsageError("--images must be >= 1");
  if (a.observers < 1) throw UsageError("--observers must be >= 1");
  io::SyntheticSpec spec;
  spec.n_blobs = a.blobs;
  spec.n_observers = a.observers;
  spec.min_fixations = a.min_fixations;
  spec.max_fixations = a.max_fixations;
  spec.obs_sigma = a.obs_sigma;
  spec.screen_w = spec.screen_h = a.screen;
  spec.image_size = a.image_size;
  spec.saliency_size = a.image_size;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto ds = io::generate_synthetic(spec, a.images, a.seed);
  const fs::path root(a.out);
  fs::create_directories(root / "images");
  fs::create_directories(root / "saliency");
  std::size_t n_scanpaths = 0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& rec = ds.records[i];
    io::write_pnm(root / *rec.image_path, ds.images[i]);
    io::write_saliency_pgm(root / *rec.saliency_path, ds.saliency[i]);
    n_scanpaths += rec.observers.size();
  }
  io::save_dataset(root / "dataset.jsonl", ds.records);
  out << "wrote " << ds.records.size() << " records, " << n_scanpaths << " scanpaths to " << root.string() << '\n';
  return kOk;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string data;
  std::string out;
  std::string resume;
  std::string features;
  std::int64_t steps = 0;
  int log_every = 0;
};

training::RunConfig load_run_config(const std::string& path) {
  if (path.empty()) return {};
  const json j = read_json_file(path);
  try {
    return training::run_config_from_json(j);
  } catch (const ShapeMismatch& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<training::TrainingExample> load_examples(const fs::path& data, const models::GeneratorConfig& gcfg,
                                                     const std::optional<std::string>& features_path) {
  const fs::path file = dataset_file(data);
  const auto records = load_nonempty(file);
  std::optional<io::FeatureMap> feats;
  if (features_path) {
    feats = io::import_features(*features_path, {gcfg.feature_channels(), gcfg.feature_h(), gcfg.feature_w()});
  }
  return training::make_examples(records, file.parent_path(), gcfg, feats ? &*feats : nullptr);
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  training::RunConfig cfg = load_run_config(a.config);
  if (a.steps > 0) cfg.train.max_steps = a.steps;
  if (!a.features.empty()) cfg.features_path = a.features;
  if (cfg.model.generator.seq_len != cfg.train.seq_len) cfg.model.generator.seq_len = cfg.train.seq_len;

  auto examples = load_examples(a.data, cfg.model.generator, cfg.features_path);
  const fs::path root(a.out);
  fs::create_directories(root);
  write_text(root / "config.json", training::to_json(cfg).dump(2) + "\n");

  training::Trainer trainer(cfg.model, cfg.train, std::move(examples));
  trainer.set_dump_dir(root);
  if (!a.resume.empty()) trainer.load(a.resume);

  std::ofstream telemetry(root / "telemetry.jsonl", a.resume.empty() ? std::ios::trunc : std::ios::app);
  if (!telemetry) throw IoError("cannot write " + (root / "telemetry.jsonl").string());

  training::StepReport last;
  try {
    while (!trainer.finished()) {
      last = trainer.step();
      telemetry << training::to_json(last).dump() << '\n';
      const std::int64_t every = cfg.train.checkpoint_every;
      if (every > 0 && last.step % every == 0 && !trainer.finished()) {
        char name[64];
        std::snprintf(name, sizeof name, "checkpoint_step_%06lld.sfck", static_cast<long long>(last.step));
        trainer.save(root / name);
      }
      if (a.log_every > 0 && last.step % a.log_every == 0)
        out << training::to_json(last).dump() << '\n';
    }
  } catch (const NonFiniteLoss& e) {
    telemetry.flush();
    err << "error: " << e.what() << '\n';
    if (!e.dump_path().empty()) err << "diagnostic dump: " << e.dump_path() << '\n';
    return kNumeric;
  }
  telemetry.flush();
  trainer.save(root / "checkpoint.sfck");
  out << "trained " << trainer.steps_done() << " steps; checkpoint " << (root / "checkpoint.sfck").string() << '\n';
  return kOk;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string report;
  std::string mm_reduce = "mean";
  std::string source = "model";
  std::string features;
  double q = 0.9;
  int length = 0;
  std::uint64_t seed = 1;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  eval::EvalOptions opts;
  opts.reduce = a.mm_reduce == "max" ? eval::MmReduce::Max : eval::MmReduce::Mean;
  if (!(a.q > 0.0 && a.q < 1.0)) throw UsageError("--q must lie in (0, 1)");

  eval::EvalReport rep;
  if (a.source == "model") {
    if (a.checkpoint.empty()) throw UsageError("--checkpoint is required for --source model");
    auto ck = training::load_checkpoint(a.checkpoint);
    std::optional<std::string> feats;
    if (!a.features.empty()) feats = a.features;
    const auto examples = load_examples(a.data, ck.meta.model.generator, feats);
    const int length = a.length > 0 ? a.length : ck.meta.train.seq_len;
    rep = eval::evaluate_generator(ck.generator, examples, length, opts);
  } else {
    const auto records = load_nonempty(dataset_file(a.data));
    std::vector<ObserverPool> pools;
    for (const auto& r : records) pools.push_back(r.pool());
    if (a.source == "observers")
      rep = eval::evaluate_observers(pools, opts);
    else
      rep = eval::evaluate_random(pools, a.length > 0 ? a.length : 10, a.seed, opts);
  }
  const std::string text = eval::to_json(rep).dump(2) + "\n";
  if (a.report.empty())
    out << text;
  else {
    write_text(a.report, text);
    out << eval::to_json(rep.aggregate).dump() << '\n';
  }
  return kOk;
}

// ---- compare / render -------------------------------------------------------

Scanpath read_scanpath(const fs::path& path) {
  const json j = read_json_file(path);
  Scanpath sp;
  try {
    sp = io::scanpath_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return sp;
}

struct CompareArgs {
  std::string a;
  std::string b;
  std::optional<double> amplitude;
  std::optional<double> direction;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const Scanpath sa = read_scanpath(a.a);
  const Scanpath sb = read_scanpath(a.b);
  metrics::Simplification simpl{a.amplitude, a.direction};
  const auto mm = metrics::multimatch(sa, sb, simpl);
  json j{{"mm_shape", mm.shape},
         {"mm_direction", mm.direction},
         {"mm_length", mm.length},
         {"mm_position", mm.position},
         {"mm_mean", mm.mean}};
  out << j.dump(2) << '\n';
  return kOk;
}

struct RenderArgs {
  std::string scanpath;
  std::string image;
  std::string out;
  double radius = 0.0;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const Scanpath sp = read_scanpath(a.scanpath);
  io::SvgOptions opts;
  if (!a.image.empty()) opts.image_href = a.image;
  if (a.radius > 0.0) opts.radius = a.radius;
  const std::string svg = io::render_svg(sp, opts);
  if (a.out.empty())
    out << svg;
  else
    write_text(a.out, svg);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarially trained scanpath prediction toolkit", "scanpath-forge"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic blob dataset");
  s->add_option("--images", synth.images, "Number of images")->capture_default_str();
  s->add_option("--observers", synth.observers, "Observers per image")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--blobs", synth.blobs, "Blobs per image")->capture_default_str();
  s->add_option("--min-fixations", synth.min_fixations)->capture_default_str();
  s->add_option("--max-fixations", synth.max_fixations)->capture_default_str();
  s->add_option("--obs-sigma", synth.obs_sigma, "Observer jitter, fraction of screen width")->capture_default_str();
  s->add_option("--screen", synth.screen, "Square screen size in pixels")->capture_default_str();
  s->add_option("--image-size", synth.image_size, "Rendered image size")->capture_default_str();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Adversarial training");
  t->add_option("--config", train.config, "JSON config file");
  t->add_option("--data", train.data, "Dataset JSONL or its directory")->required();
  t->add_option("--out", train.out, "Output directory")->required();
  t->add_option("--resume", train.resume, "Checkpoint to resume from");
  t->add_option("--steps", train.steps, "Override max_steps");
  t->add_option("--features", train.features, "Precomputed feature file (encoder bypass)");
  t->add_option("--log-every", train.log_every, "Print every n-th step report");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Metric report per image and aggregate");
  e->add_option("--checkpoint", ev.checkpoint, "Trained checkpoint");
  e->add_option("--data", ev.data, "Dataset JSONL or its directory")->required();
  e->add_option("--report", ev.report, "Output JSON report (stdout when omitted)");
  e->add_option("--mm-reduce", ev.mm_reduce, "Reduce MultiMatch over observers")
      ->check(CLI::IsMember({"mean", "max"}))
      ->capture_default_str();
  e->add_option("--source", ev.source, "Scanpaths to score")
      ->check(CLI::IsMember({"model", "observers", "random"}))
      ->capture_default_str();
  e->add_option("--q", ev.q, "Congruency quantile")->capture_default_str();
  e->add_option("--length", ev.length, "Generated scanpath length");
  e->add_option("--seed", ev.seed, "Seed for --source random")->capture_default_str();
  e->add_option("--features", ev.features, "Precomputed feature file (encoder bypass)");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "MultiMatch between two scanpath JSON files");
  c->add_option("a", cmp.a)->required();
  c->add_option("b", cmp.b)->required();
  c->add_option("--simplify-amplitude", cmp.amplitude, "Merge saccades shorter than this (px)");
  c->add_option("--simplify-direction", cmp.direction, "Merge turns smaller than this (rad)");

  RenderArgs rnd;
  auto* r = app.add_subcommand("render", "SVG overlay of a scanpath");
  r->add_option("--scanpath", rnd.scanpath, "Scanpath JSON file")->required();
  r->add_option("--image", rnd.image, "Background image href");
  r->add_option("--out", rnd.out, "Output SVG (stdout when omitted)");
  r->add_option("--radius", rnd.radius, "Base circle radius");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << '\n';
    return kUsage;
  }

  try {
    if (*s) return cmd_synth(synth, out);
    if (*t) return cmd_train(train, out, err);
    if (*e) return cmd_eval(ev, out);
    if (*c) return cmd_compare(cmp, out);
    if (*r) return cmd_render(rnd, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const InvalidScanpath& ex) {
    err << "error: invalid scanpath: " << ex.what() << '\n';
    return kUsage;
  } catch (const NonFiniteLoss& ex) {
    err << "error: " << ex.what() << '\n';
    if (!ex.dump_path().empty()) err << "diagnostic dump: " << ex.dump_path() << '\n';
    return kNumeric;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace sf::cli
