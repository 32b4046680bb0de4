#include "sf/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace sf::io {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> radii(const Scanpath& sp, double base) {
  const std::size_t n = sp.fixations.size();
  std::vector<double> r(n, base);
  const bool timed = n >= 2 && std::all_of(sp.fixations.begin(), sp.fixations.end(), [](const Fixation& f) { return f.t_ms.has_value(); });
  if (!timed) return r;
  std::vector<double> dur(n);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dur[i] = std::max(0.0, *sp.fixations[i + 1].t_ms - *sp.fixations[i].t_ms);
    total += dur[i];
  }
  const double mean = total / static_cast<double>(n - 1);
  if (!(mean > 0.0)) return r;
  dur[n - 1] = mean;  // last fixation has no following onset
  for (std::size_t i = 0; i < n; ++i) r[i] = base * std::clamp(std::sqrt(dur[i] / mean), 0.4, 2.5);
  return r;
}

}  // namespace

std::string render_svg(const Scanpath& sp, const SvgOptions& opts) {
  require_valid(sp);
  const double base = opts.radius > 0.0 ? opts.radius : std::max(4.0, std::min(sp.screen_w, sp.screen_h) / 40.0);
  const auto r = radii(sp, base);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << sp.screen_w << "\" height=\"" << sp.screen_h
     << "\" viewBox=\"0 0 " << sp.screen_w << ' ' << sp.screen_h << "\">\n";
  if (opts.image_href)
    os << "  <image href=\"" << escape(*opts.image_href) << "\" x=\"0\" y=\"0\" width=\"" << sp.screen_w
       << "\" height=\"" << sp.screen_h << "\" preserveAspectRatio=\"none\"/>\n";
  else
    os << "  <rect x=\"0\" y=\"0\" width=\"" << sp.screen_w << "\" height=\"" << sp.screen_h << "\" fill=\"#202020\"/>\n";
  const auto& f = sp.fixations;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    os << "  <line x1=\"" << num(f[i].x) << "\" y1=\"" << num(f[i].y) << "\" x2=\"" << num(f[i + 1].x) << "\" y2=\""
       << num(f[i + 1].y) << "\" stroke=\"#ffd23f\" stroke-width=\"" << num(base / 3.0) << "\" stroke-opacity=\"0.8\"/>\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const char* fill = i == 0 ? "#3bceac" : "#ee4266";
    os << "  <circle cx=\"" << num(f[i].x) << "\" cy=\"" << num(f[i].y) << "\" r=\"" << num(r[i]) << "\" fill=\""
       << fill << "\" fill-opacity=\"0.85\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    os << "  <text x=\"" << num(f[i].x) << "\" y=\"" << num(f[i].y) << "\" font-size=\"" << num(r[i])
       << "\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"#ffffff\">" << (i + 1) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sf::io
