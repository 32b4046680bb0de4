#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sf/core/types.hpp"

namespace sf::metrics {

struct SaccadeVector {
  double dx = 0.0;
  double dy = 0.0;
  double amplitude = 0.0;
  double angle = 0.0;  // atan2(dy, dx) in (-pi, pi]; 0 for a zero vector
  // landing fixation (fixation k+1 of the source scanpath)
  double end_x = 0.0;
  double end_y = 0.0;
};

/// Vector k is fixation[k+1] - fixation[k]. Throws TooShort below 2 fixations.
std::vector<SaccadeVector> saccade_vectors(const Scanpath& sp);

using AlignmentPath = std::vector<std::pair<int, int>>;

/// Minimum-cost monotone path over the |u| x |v| grid with
/// cost(i, j) = |u_i - v_j|, from (0, 0) to (|u|-1, |v|-1). Ties prefer the
/// diagonal step, then the i step, then the j step.
AlignmentPath align(const std::vector<SaccadeVector>& u, const std::vector<SaccadeVector>& v);

double alignment_cost(const std::vector<SaccadeVector>& u, const std::vector<SaccadeVector>& v,
                      const AlignmentPath& path);

/// Optional MultiMatch-style pre-merging. An interior fixation is removed when
/// either adjacent saccade is shorter than amplitude_px, or when the two
/// saccades around it turn by less than direction_rad. Both unset = off.
struct Simplification {
  std::optional<double> amplitude_px;
  std::optional<double> direction_rad;

  bool enabled() const noexcept { return amplitude_px.has_value() || direction_rad.has_value(); }
};

Scanpath simplify(const Scanpath& sp, const Simplification& opts);

struct MultiMatch {
  double shape = 0.0;
  double direction = 0.0;
  double length = 0.0;
  double position = 0.0;
  double mean = 0.0;
};

/// Four-component MultiMatch similarity (no duration). Symmetric in its
/// arguments. Throws TooShort or ScreenMismatch.
MultiMatch multimatch(const Scanpath& a, const Scanpath& b, const Simplification& simplification = {});

}  // namespace sf::metrics
