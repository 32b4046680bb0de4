#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sf/core/types.hpp"
#include "sf/metrics/multimatch.hpp"
#include "sf/models/generator.hpp"
#include "sf/training/example.hpp"

namespace sf::eval {

enum class MmReduce { Mean, Max };
enum class Source { Model, Observers, Random };

struct EvalOptions {
  MmReduce reduce = MmReduce::Mean;
  double q = 0.9;                   // congruency quantile
  std::optional<double> sigma_px;   // pooled-map smoothing; default screen_w / 24
  metrics::Simplification simplification;
};

/// Scores one predicted scanpath against a pool: MultiMatch per observer,
/// reduced by mean (componentwise) or max (the best observer by mm_mean);
/// NSS and Congruency on the pooled saliency map.
MetricReport evaluate_scanpath(const Scanpath& predicted, const ObserverPool& reference,
                               const SaliencyMap& pooled, const EvalOptions& opts);

/// Pooled map used for NSS and Congruency.
SaliencyMap pooled_map(const ObserverPool& pool, const EvalOptions& opts);

struct ImageReport {
  std::string image_id;
  MetricReport metrics;
};

struct EvalReport {
  std::vector<ImageReport> images;
  MetricReport aggregate;  // unweighted mean over images
};

MetricReport mean_report(const std::vector<ImageReport>& images);

/// Generated scanpath of length `length` per example.
EvalReport evaluate_generator(models::Generator& gen, const std::vector<training::TrainingExample>& examples,
                              int length, const EvalOptions& opts);

/// Each observer is scored against the remaining observers (leave-one-out),
/// and the per-observer reports are averaged per image. Pools need >= 2
/// observers.
EvalReport evaluate_observers(const std::vector<ObserverPool>& pools, const EvalOptions& opts);

/// Uniform-random scanpaths of `length` fixations over each screen.
EvalReport evaluate_random(const std::vector<ObserverPool>& pools, int length, std::uint64_t seed,
                           const EvalOptions& opts);

/// Uniform-random scanpath over the pool's screen.
Scanpath random_scanpath(const ObserverPool& pool, int length, std::uint64_t seed);

Scanpath to_scanpath(const std::vector<NormalizedPoint>& pts, const ObserverPool& pool,
                     const std::string& observer_id);

nlohmann::json to_json(const MetricReport& r);
/// {"images": {"<image_id>": {<7 fields>}, ...}, "aggregate": {<7 fields>}, "n_images": n}
nlohmann::json to_json(const EvalReport& r);

}  // namespace sf::eval
