#include "sf/eval/evaluate.hpp"

#include <algorithm>

#include "sf/core/random.hpp"
#include "sf/metrics/saliency.hpp"
#include "sf/training/sampler.hpp"

namespace sf::eval {

namespace {

void accumulate(MetricReport& acc, const MetricReport& r, double w) {
  acc.mm_shape += w * r.mm_shape;
  acc.mm_direction += w * r.mm_direction;
  acc.mm_length += w * r.mm_length;
  acc.mm_position += w * r.mm_position;
  acc.mm_mean += w * r.mm_mean;
  acc.nss += w * r.nss;
  acc.congruency += w * r.congruency;
}

MetricReport from_mm(const metrics::MultiMatch& m) {
  MetricReport r;
  r.mm_shape = m.shape;
  r.mm_direction = m.direction;
  r.mm_length = m.length;
  r.mm_position = m.position;
  r.mm_mean = m.mean;
  return r;
}

}  // namespace

SaliencyMap pooled_map(const ObserverPool& pool, const EvalOptions& opts) {
  require_valid(pool);
  const int w = pool.scanpaths.front().screen_w;
  return metrics::synthesize_saliency(pool, opts.sigma_px.value_or(metrics::default_sigma_px(w)));
}

MetricReport evaluate_scanpath(const Scanpath& predicted, const ObserverPool& reference, const SaliencyMap& pooled,
                               const EvalOptions& opts) {
  if (reference.scanpaths.empty()) throw EmptyPool("evaluate: reference pool is empty");
  MetricReport out;
  if (opts.reduce == MmReduce::Mean) {
    const double w = 1.0 / static_cast<double>(reference.scanpaths.size());
    for (const auto& obs : reference.scanpaths)
      accumulate(out, from_mm(metrics::multimatch(predicted, obs, opts.simplification)), w);
  } else {
    bool first = true;
    for (const auto& obs : reference.scanpaths) {
      const auto m = metrics::multimatch(predicted, obs, opts.simplification);
      if (first || m.mean > out.mm_mean) out = from_mm(m);
      first = false;
    }
  }
  out.nss = metrics::nss(predicted, pooled);
  out.congruency = metrics::congruency(predicted, pooled, opts.q);
  return out;
}

MetricReport mean_report(const std::vector<ImageReport>& images) {
  MetricReport acc;
  if (images.empty()) return acc;
  const double w = 1.0 / static_cast<double>(images.size());
  for (const auto& im : images) accumulate(acc, im.metrics, w);
  return acc;
}

Scanpath to_scanpath(const std::vector<NormalizedPoint>& pts, const ObserverPool& pool,
                     const std::string& observer_id) {
  require_valid(pool);
  const auto& ref = pool.scanpaths.front();
  Scanpath sp;
  sp.image_id = pool.image_id;
  sp.observer_id = observer_id;
  sp.screen_w = ref.screen_w;
  sp.screen_h = ref.screen_h;
  sp.fixations = denormalize_coords(pts, ref.screen_w, ref.screen_h);
  // Sigmoid outputs lie in (0, 1); guard the closed upper edge after scaling.
  for (auto& f : sp.fixations) {
    f.x = std::min(f.x, static_cast<double>(sp.screen_w));
    f.y = std::min(f.y, static_cast<double>(sp.screen_h));
  }
  return sp;
}

Scanpath random_scanpath(const ObserverPool& pool, int length, std::uint64_t seed) {
  require_valid(pool);
  if (length < 1) throw Error("random_scanpath: length must be >= 1");
  Rng rng(mix_seed(seed, training::image_key(pool.image_id)));
  std::vector<NormalizedPoint> pts;
  for (int i = 0; i < length; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    pts.push_back({u, v});
  }
  return to_scanpath(pts, pool, "random");
}

EvalReport evaluate_generator(models::Generator& gen, const std::vector<training::TrainingExample>& examples,
                              int length, const EvalOptions& opts) {
  if (examples.empty()) throw EmptyInput("evaluate: no images");
  EvalReport rep;
  for (const auto& ex : examples) {
    const auto pts = gen.generate(ex.input, length, ex.is_features);
    const Scanpath pred = to_scanpath(pts, ex.pool, "model");
    rep.images.push_back({ex.image_id, evaluate_scanpath(pred, ex.pool, pooled_map(ex.pool, opts), opts)});
  }
  rep.aggregate = mean_report(rep.images);
  return rep;
}

EvalReport evaluate_observers(const std::vector<ObserverPool>& pools, const EvalOptions& opts) {
  if (pools.empty()) throw EmptyInput("evaluate: no images");
  EvalReport rep;
  for (const auto& pool : pools) {
    if (pool.scanpaths.size() < 2)
      throw EmptyPool("evaluate: leave-one-out needs >= 2 observers for image '" + pool.image_id + "'");
    MetricReport acc;
    const double w = 1.0 / static_cast<double>(pool.scanpaths.size());
    for (std::size_t k = 0; k < pool.scanpaths.size(); ++k) {
      ObserverPool rest{pool.image_id, {}};
      for (std::size_t j = 0; j < pool.scanpaths.size(); ++j)
        if (j != k) rest.scanpaths.push_back(pool.scanpaths[j]);
      accumulate(acc, evaluate_scanpath(pool.scanpaths[k], rest, pooled_map(rest, opts), opts), w);
    }
    rep.images.push_back({pool.image_id, acc});
  }
  rep.aggregate = mean_report(rep.images);
  return rep;
}

EvalReport evaluate_random(const std::vector<ObserverPool>& pools, int length, std::uint64_t seed,
                           const EvalOptions& opts) {
  if (pools.empty()) throw EmptyInput("evaluate: no images");
  EvalReport rep;
  for (const auto& pool : pools) {
    const Scanpath pred = random_scanpath(pool, length, seed);
    rep.images.push_back({pool.image_id, evaluate_scanpath(pred, pool, pooled_map(pool, opts), opts)});
  }
  rep.aggregate = mean_report(rep.images);
  return rep;
}

nlohmann::json to_json(const MetricReport& r) {
  return {{"mm_shape", r.mm_shape},       {"mm_direction", r.mm_direction}, {"mm_length", r.mm_length},
          {"mm_position", r.mm_position}, {"mm_mean", r.mm_mean},           {"nss", r.nss},
          {"congruency", r.congruency}};
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json images = nlohmann::json::object();
  for (const auto& im : r.images) images[im.image_id] = to_json(im.metrics);
  return {{"images", images}, {"aggregate", to_json(r.aggregate)}, {"n_images", r.images.size()}};
}

}  // namespace sf::eval
