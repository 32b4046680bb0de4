#include "sf/metrics/multimatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sf::metrics {

std::vector<SaccadeVector> saccade_vectors(const Scanpath& sp) {
  if (sp.fixations.size() < 2)
    throw TooShort("scanpath '" + sp.observer_id + "' needs at least 2 fixations to form a saccade");
  std::vector<SaccadeVector> out;
  out.reserve(sp.fixations.size() - 1);
  for (std::size_t k = 0; k + 1 < sp.fixations.size(); ++k) {
    const auto& a = sp.fixations[k];
    const auto& b = sp.fixations[k + 1];
    SaccadeVector s;
    s.dx = b.x - a.x;
    s.dy = b.y - a.y;
    s.amplitude = std::hypot(s.dx, s.dy);
    s.angle = s.amplitude > 0.0 ? std::atan2(s.dy, s.dx) : 0.0;
    s.end_x = b.x;
    s.end_y = b.y;
    out.push_back(s);
  }
  return out;
}

namespace {

double vector_distance(const SaccadeVector& a, const SaccadeVector& b) { return std::hypot(a.dx - b.dx, a.dy - b.dy); }

// Angle between two saccades in [0, pi]. A zero vector has no direction:
// two zero vectors agree, one zero vector counts as a right angle.
double angle_between(const SaccadeVector& a, const SaccadeVector& b) {
  const bool za = a.amplitude == 0.0, zb = b.amplitude == 0.0;
  if (za && zb) return 0.0;
  if (za || zb) return 0.5 * std::numbers::pi;
  double d = std::fabs(a.angle - b.angle);
  if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
  return std::clamp(d, 0.0, std::numbers::pi);
}

bool lexicographically_less(const Scanpath& a, const Scanpath& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fa = a.fixations[i];
    const auto& fb = b.fixations[i];
    if (fa.x != fb.x) return fa.x < fb.x;
    if (fa.y != fb.y) return fa.y < fb.y;
  }
  return a.size() < b.size();
}

}  // namespace

AlignmentPath align(const std::vector<SaccadeVector>& u, const std::vector<SaccadeVector>& v) {
  if (u.empty() || v.empty()) throw EmptyInput("align: both saccade sequences must be nonempty");
  const int m = static_cast<int>(u.size()), n = static_cast<int>(v.size());
  const auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  std::vector<double> acc(static_cast<std::size_t>(m) * n, 0.0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double best = 0.0;
      if (i > 0 || j > 0) {
        const double diag = (i > 0 && j > 0) ? acc[at(i - 1, j - 1)] : inf;
        const double up = i > 0 ? acc[at(i - 1, j)] : inf;
        const double left = j > 0 ? acc[at(i, j - 1)] : inf;
        best = std::min({diag, up, left});
      }
      acc[at(i, j)] = best + vector_distance(u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }

  AlignmentPath path;
  int i = m - 1, j = n - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? acc[at(i - 1, j - 1)] : inf;
    const double up = i > 0 ? acc[at(i - 1, j)] : inf;
    const double left = j > 0 ? acc[at(i, j - 1)] : inf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double alignment_cost(const std::vector<SaccadeVector>& u, const std::vector<SaccadeVector>& v,
                      const AlignmentPath& path) {
  double c = 0.0;
  for (auto [i, j] : path) c += vector_distance(u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  return c;
}

Scanpath simplify(const Scanpath& sp, const Simplification& opts) {
  if (!opts.enabled() || sp.fixations.size() < 3) return sp;
  Scanpath out = sp;
  auto& f = out.fixations;
  bool changed = true;
  while (changed && f.size() >= 3) {
    changed = false;
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      const double ax = f[k].x - f[k - 1].x, ay = f[k].y - f[k - 1].y;
      const double bx = f[k + 1].x - f[k].x, by = f[k + 1].y - f[k].y;
      const double la = std::hypot(ax, ay), lb = std::hypot(bx, by);
      bool merge = false;
      if (opts.amplitude_px && (la < *opts.amplitude_px || lb < *opts.amplitude_px)) merge = true;
      if (!merge && opts.direction_rad && la > 0.0 && lb > 0.0) {
        const double cosang = std::clamp((ax * bx + ay * by) / (la * lb), -1.0, 1.0);
        if (std::acos(cosang) < *opts.direction_rad) merge = true;
      }
      if (merge) {
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  return out;
}

MultiMatch multimatch(const Scanpath& a_in, const Scanpath& b_in, const Simplification& simplification) {
  if (a_in.screen_w != b_in.screen_w || a_in.screen_h != b_in.screen_h)
    throw ScreenMismatch("multimatch: scanpaths were recorded on different screens");
  require_valid(a_in);
  require_valid(b_in);
  const Scanpath a = simplify(a_in, simplification);
  const Scanpath b = simplify(b_in, simplification);
  // Align in a canonical argument order so that swapping the inputs yields
  // the same path, and hence bitwise-identical similarities.
  const bool swap = lexicographically_less(b, a);
  const auto u = saccade_vectors(swap ? b : a);
  const auto v = saccade_vectors(swap ? a : b);
  const AlignmentPath path = align(u, v);

  const double diag = std::hypot(static_cast<double>(a.screen_w), static_cast<double>(a.screen_h));
  double shape = 0, direction = 0, length = 0, position = 0;
  for (auto [i, j] : path) {
    const auto& x = u[static_cast<std::size_t>(i)];
    const auto& y = v[static_cast<std::size_t>(j)];
    shape += vector_distance(x, y) / (2.0 * diag);
    direction += angle_between(x, y) / std::numbers::pi;
    length += std::fabs(x.amplitude - y.amplitude) / diag;
    position += std::hypot(x.end_x - y.end_x, x.end_y - y.end_y) / diag;
  }
  const double n = static_cast<double>(path.size());
  auto sim = [n](double dis) { return std::clamp(1.0 - dis / n, 0.0, 1.0); };
  MultiMatch r{sim(shape), sim(direction), sim(length), sim(position), 0.0};
  r.mean = (r.shape + r.direction + r.length + r.position) / 4.0;
  return r;
}

}  // namespace sf::metrics
