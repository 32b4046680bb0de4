#pragma once

#include <optional>
#include <string>

#include "sf/core/types.hpp"

namespace sf::io {

struct SvgOptions {
  std::optional<std::string> image_href;  // drawn underneath when set
  double radius = 0.0;                    // 0 = derived from the screen size
};

/// Numbered fixation circles joined by saccade lines; the first fixation is
/// drawn in a distinct color. Circle radius scales with sqrt(duration) when
/// every fixation carries an onset time. Throws InvalidScanpath.
std::string render_svg(const Scanpath& sp, const SvgOptions& opts = {});

}  // namespace sf::io
