#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "oracles.hpp"
#include "sf/core/random.hpp"
#include "sf/core/types.hpp"

using namespace sf;

namespace {

Scanpath path(std::vector<Fixation> f, int w = 800, int h = 600) {
  Scanpath sp;
  sp.image_id = "img";
  sp.observer_id = "o";
  sp.screen_w = w;
  sp.screen_h = h;
  sp.fixations = std::move(f);
  return sp;
}

}  // namespace

TEST_CASE("validation reports the first violated invariant") {
  CHECK_FALSE(validate_scanpath(path({{0, 0}, {800, 600}})).has_value());

  auto e = validate_scanpath(path({}));
  REQUIRE(e);
  CHECK(e->issue == ScanpathIssue::EmptyScanpath);

  e = validate_scanpath(path({{1, 1}}, 0, 600));
  REQUIRE(e);
  CHECK(e->issue == ScanpathIssue::BadScreen);

  e = validate_scanpath(path({{1, 1}, {2, 2}, {801, 2}}));
  REQUIRE(e);
  CHECK(e->issue == ScanpathIssue::OutOfBounds);
  CHECK(e->index == 2);

  e = validate_scanpath(path({{1, 1}, {-0.001, 2}}));
  REQUIRE(e);
  CHECK(e->index == 1);

  e = validate_scanpath(path({{std::numeric_limits<double>::quiet_NaN(), 1}}));
  REQUIRE(e);
  CHECK(e->issue == ScanpathIssue::NonFinite);
  CHECK_THROWS_AS(require_valid(path({{1, std::numeric_limits<double>::infinity()}})), InvalidScanpath);
}

TEST_CASE("pool validation") {
  ObserverPool pool{"img", {}};
  CHECK_THROWS_AS(require_valid(pool), EmptyPool);
  pool.scanpaths = {path({{1, 1}}), path({{1, 1}}, 1024, 768)};
  CHECK_THROWS_AS(require_valid(pool), ScreenMismatch);
  pool.scanpaths = {path({{1, 1}})};
  pool.scanpaths[0].image_id = "other";
  CHECK_THROWS_AS(require_valid(pool), Error);
}

TEST_CASE("normalization round trip over random scanpaths") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(2000));
    const int h = 1 + static_cast<int>(rng.below(2000));
    auto sp = path({}, w, h);
    const int n = 1 + static_cast<int>(rng.below(20));
    for (int i = 0; i < n; ++i) sp.fixations.push_back({rng.uniform(0, w), rng.uniform(0, h)});
    const auto norm = normalize_coords(sp);
    for (const auto& p : norm) {
      CHECK(p.u >= 0.0);
      CHECK(p.u <= 1.0);
      CHECK(p.v >= 0.0);
      CHECK(p.v <= 1.0);
    }
    const auto back = denormalize_coords(norm, w, h);
    REQUIRE(back.size() == sp.fixations.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(std::abs(back[i].x - sp.fixations[i].x) <= 1e-9 * w);
      CHECK(std::abs(back[i].y - sp.fixations[i].y) <= 1e-9 * h);
    }
  }
}

TEST_CASE("normalization rejects invalid input") {
  CHECK_THROWS_AS(normalize_coords(path({{900, 1}})), InvalidScanpath);
}

TEST_CASE("rng is reproducible and in range") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs |= (x != c.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(differs);

  Rng r(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.below(7)];
  for (int cnt : counts) CHECK(std::abs(cnt - 10000) < 500);

  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("mix_seed separates nearby inputs") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(mix_seed(a, b));
  CHECK(seen.size() == 2500);
}
