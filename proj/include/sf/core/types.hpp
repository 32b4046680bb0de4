#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sf/core/errors.hpp"

namespace sf {

// Pixel convention: x grows rightward, y downward, origin at the top-left
// corner of the screen.
struct Fixation {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> t_ms;  // carried through I/O, ignored by all metrics
};

struct Scanpath {
  std::string image_id;
  std::string observer_id;
  int screen_w = 0;
  int screen_h = 0;
  std::vector<Fixation> fixations;

  std::size_t size() const noexcept { return fixations.size(); }
};

/// Nonnegative row-major grid.
struct SaliencyMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  SaliencyMap() = default;
  SaliencyMap(int w, int h, double fill = 0.0);

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
};

struct ObserverPool {
  std::string image_id;
  std::vector<Scanpath> scanpaths;
};

struct MetricReport {
  double mm_shape = 0.0;
  double mm_direction = 0.0;
  double mm_length = 0.0;
  double mm_position = 0.0;
  double mm_mean = 0.0;
  double nss = 0.0;
  double congruency = 0.0;
};

struct NormalizedPoint {
  double u = 0.0;
  double v = 0.0;
};

enum class ScanpathIssue { EmptyScanpath, BadScreen, OutOfBounds, NonFinite };

struct ScanpathError {
  ScanpathIssue issue;
  std::size_t index = 0;

  std::string message() const;
};

class InvalidScanpath : public Error {
 public:
  explicit InvalidScanpath(ScanpathError e) : Error(e.message()), error_(e) {}
  const ScanpathError& error() const noexcept { return error_; }

 private:
  ScanpathError error_;
};

/// Empty optional means the scanpath satisfies every invariant.
std::optional<ScanpathError> validate_scanpath(const Scanpath& sp);

/// Throws InvalidScanpath on the first violated invariant.
void require_valid(const Scanpath& sp);

/// Checks pool-level invariants (nonempty, shared image id and screen) plus
/// every member scanpath.
void require_valid(const ObserverPool& pool);

std::vector<NormalizedPoint> normalize_coords(const Scanpath& sp);

std::vector<Fixation> denormalize_coords(const std::vector<NormalizedPoint>& pts, int screen_w,
                                         int screen_h);

}  // namespace sf
