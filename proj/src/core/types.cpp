#include "sf/core/types.hpp"

#include <cmath>

namespace sf {

SaliencyMap::SaliencyMap(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

std::string ScanpathError::message() const {
  switch (issue) {
    case ScanpathIssue::EmptyScanpath:
      return "scanpath has no fixations";
    case ScanpathIssue::BadScreen:
      return "screen dimensions must be positive";
    case ScanpathIssue::OutOfBounds:
      return "fixation " + std::to_string(index) + " lies outside the screen";
    case ScanpathIssue::NonFinite:
      return "fixation " + std::to_string(index) + " has a non-finite coordinate";
  }
  return "invalid scanpath";
}

std::optional<ScanpathError> validate_scanpath(const Scanpath& sp) {
  if (sp.fixations.empty()) return ScanpathError{ScanpathIssue::EmptyScanpath, 0};
  if (sp.screen_w <= 0 || sp.screen_h <= 0) return ScanpathError{ScanpathIssue::BadScreen, 0};
  for (std::size_t i = 0; i < sp.fixations.size(); ++i) {
    const auto& f = sp.fixations[i];
    if (!std::isfinite(f.x) || !std::isfinite(f.y)) return ScanpathError{ScanpathIssue::NonFinite, i};
    if (f.x < 0.0 || f.y < 0.0 || f.x > sp.screen_w || f.y > sp.screen_h)
      return ScanpathError{ScanpathIssue::OutOfBounds, i};
  }
  return std::nullopt;
}

void require_valid(const Scanpath& sp) {
  if (auto err = validate_scanpath(sp)) throw InvalidScanpath(*err);
}

void require_valid(const ObserverPool& pool) {
  if (pool.scanpaths.empty()) throw EmptyPool("observer pool for '" + pool.image_id + "' is empty");
  const auto& first = pool.scanpaths.front();
  for (const auto& sp : pool.scanpaths) {
    require_valid(sp);
    if (sp.image_id != pool.image_id)
      throw Error("scanpath of observer '" + sp.observer_id + "' belongs to image '" + sp.image_id +
                  "', expected '" + pool.image_id + "'");
    if (sp.screen_w != first.screen_w || sp.screen_h != first.screen_h)
      throw ScreenMismatch("observers of '" + pool.image_id + "' disagree on screen size");
  }
}

std::vector<NormalizedPoint> normalize_coords(const Scanpath& sp) {
  require_valid(sp);
  std::vector<NormalizedPoint> out;
  out.reserve(sp.size());
  const double w = sp.screen_w;
  const double h = sp.screen_h;
  for (const auto& f : sp.fixations) out.push_back({f.x / w, f.y / h});
  return out;
}

std::vector<Fixation> denormalize_coords(const std::vector<NormalizedPoint>& pts, int screen_w,
                                         int screen_h) {
  std::vector<Fixation> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({p.u * screen_w, p.v * screen_h, std::nullopt});
  return out;
}

}  // namespace sf
