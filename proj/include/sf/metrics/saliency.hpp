#pragma once

#include "sf/core/types.hpp"

namespace sf::metrics {

/// Default smoothing width: about one degree of visual angle at typical
/// viewing distance.
inline double default_sigma_px(int screen_w) { return screen_w / 24.0; }

struct GridCell {
  int row = 0;
  int col = 0;
};

/// Nearest pixel center after proportional rescaling from screen to a
/// grid_w x grid_h grid, clamped into the grid.
GridCell fixation_to_cell(const Fixation& f, int screen_w, int screen_h, int grid_w, int grid_h);

/// Binary fixation map of all pooled fixations convolved with an isotropic
/// Gaussian (sigma in screen pixels, kernel truncated at 3 sigma), without
/// normalization. Grid defaults to the screen size.
SaliencyMap fixation_density(const ObserverPool& pool, double sigma_px, int grid_w = 0, int grid_h = 0);

/// fixation_density scaled so its maximum is 1.
SaliencyMap synthesize_saliency(const ObserverPool& pool, double sigma_px, int grid_w = 0, int grid_h = 0);

/// Mean of the standardized map (population std) at the fixation pixels.
/// Throws FlatMap when std < 1e-12, TooShort for an empty scanpath.
double nss(const Scanpath& sp, const SaliencyMap& sal);

/// Linear-interpolated q-quantile of the map values (q in [0, 1]).
double map_quantile(const SaliencyMap& sal, double q);

/// Fraction of fixations on pixels whose value is >= the q-quantile.
double congruency(const Scanpath& sp, const SaliencyMap& sal, double q = 0.9);

}  // namespace sf::metrics
