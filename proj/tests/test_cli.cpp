#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sf/cli/commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = sf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("sf_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string s; std::getline(in, s);)
    if (!s.empty()) out.push_back(s);
  return out;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::vector<std::string> kMetricKeys{"congruency", "mm_direction", "mm_length", "mm_mean",
                                           "mm_position", "mm_shape",    "nss"};

std::vector<std::string> keys(const json& j) {
  std::vector<std::string> k;
  for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
  return k;
}

}  // namespace

TEST_CASE("synth counts and determinism") {
  const auto dir = scratch("synth");
  auto r = cli({"synth", "--images", "20", "--observers", "15", "--seed", "7", "--out", (dir / "a").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("20 records") != std::string::npos);
  CHECK(r.out.find("300 scanpaths") != std::string::npos);
  const auto recs = lines(dir / "a" / "dataset.jsonl");
  CHECK(recs.size() == 20);
  std::size_t scanpaths = 0;
  for (const auto& l : recs) scanpaths += json::parse(l).at("observers").size();
  CHECK(scanpaths == 300);

  REQUIRE(cli({"synth", "--images", "20", "--observers", "15", "--seed", "7", "--out", (dir / "b").string()}).code == 0);
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir / "a");
    CHECK(slurp(e.path()) == slurp(dir / "b" / rel));
  }
  CHECK(fs::exists(dir / "a" / "images"));
  CHECK(fs::exists(dir / "a" / "saliency"));
  fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(cli({"synth", "--observers", "0", "--out", "/tmp/sf_unused"}).code == 1);
  CHECK(cli({"synth"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"eval", "--data", "x", "--source", "sideways"}).code == 1);
}

TEST_CASE("train smoke run on the default config") {
  const auto dir = scratch("smoke");
  REQUIRE(cli({"synth", "--images", "16", "--out", (dir / "data").string()}).code == 0);
  const auto t0 = std::chrono::steady_clock::now();
  auto r = cli({"train", "--data", (dir / "data").string(), "--out", (dir / "run").string(), "--steps", "10"});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(r.code == 0);
  CHECK(secs < 30.0);
  const auto tel = lines(dir / "run" / "telemetry.jsonl");
  REQUIRE(tel.size() == 10);
  const auto last = json::parse(tel.back());
  CHECK(last.at("step") == 10);
  for (const char* k : {"d_loss", "g_loss", "d_real_acc", "d_fake_acc"}) CHECK(last.contains(k));
  CHECK(fs::exists(dir / "run" / "checkpoint.sfck"));
  CHECK(fs::exists(dir / "run" / "config.json"));
  fs::remove_all(dir);
}

TEST_CASE("missing dataset exits with 2") {
  auto r = cli({"train", "--data", "/nonexistent/sf/data.jsonl", "--out", "/tmp/sf_unused_out"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("resume continues bitwise") {
  const auto dir = scratch("resume");
  REQUIRE(cli({"synth", "--images", "6", "--observers", "4", "--image-size", "64", "--out", (dir / "data").string()})
              .code == 0);
  write(dir / "cfg.json", R"({"train": {"batch_size": 4, "max_steps": 6, "checkpoint_every": 3, "resample_period_steps": 1}})");
  const std::string data = (dir / "data").string(), cfg = (dir / "cfg.json").string();
  REQUIRE(cli({"train", "--config", cfg, "--data", data, "--out", (dir / "full").string()}).code == 0);
  REQUIRE(fs::exists(dir / "full" / "checkpoint_step_000003.sfck"));
  REQUIRE(cli({"train", "--config", cfg, "--data", data, "--out", (dir / "tail").string(), "--resume",
               (dir / "full" / "checkpoint_step_000003.sfck").string()})
              .code == 0);
  const auto full = lines(dir / "full" / "telemetry.jsonl"), tail = lines(dir / "tail" / "telemetry.jsonl");
  REQUIRE(full.size() == 6);
  REQUIRE(tail.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(tail[i] == full[i + 3]);
  CHECK(slurp(dir / "tail" / "checkpoint.sfck") == slurp(dir / "full" / "checkpoint.sfck"));
  fs::remove_all(dir);
}

TEST_CASE("eval report schema, sources and reproducibility") {
  const auto dir = scratch("eval");
  const std::string data = (dir / "data").string();
  REQUIRE(cli({"synth", "--images", "4", "--observers", "5", "--out", data}).code == 0);
  REQUIRE(cli({"train", "--data", data, "--out", (dir / "run").string(), "--steps", "2"}).code == 0);
  const std::string ck = (dir / "run" / "checkpoint.sfck").string();

  auto r1 = cli({"eval", "--checkpoint", ck, "--data", data, "--report", (dir / "r1.json").string()});
  REQUIRE(r1.code == 0);
  auto r2 = cli({"eval", "--checkpoint", ck, "--data", data, "--report", (dir / "r2.json").string()});
  REQUIRE(r2.code == 0);
  CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));

  const auto rep = json::parse(slurp(dir / "r1.json"));
  CHECK(keys(rep.at("aggregate")) == kMetricKeys);
  CHECK(rep.at("images").size() == 4);
  CHECK(rep.at("n_images") == 4);
  for (const auto& [id, m] : rep.at("images").items()) CHECK(keys(m) == kMetricKeys);

  auto obs = cli({"eval", "--data", data, "--source", "observers"});
  auto rnd = cli({"eval", "--data", data, "--source", "random", "--seed", "3"});
  REQUIRE(obs.code == 0);
  REQUIRE(rnd.code == 0);
  const double mo = json::parse(obs.out).at("aggregate").at("mm_mean");
  const double mr = json::parse(rnd.out).at("aggregate").at("mm_mean");
  CHECK(mo > mr);

  auto mx = cli({"eval", "--checkpoint", ck, "--data", data, "--mm-reduce", "max"});
  REQUIRE(mx.code == 0);
  const double mean_mm = rep.at("aggregate").at("mm_mean");
  CHECK(json::parse(mx.out).at("aggregate").at("mm_mean").get<double>() >= mean_mm);

  write(dir / "empty.jsonl", "");
  CHECK(cli({"eval", "--checkpoint", ck, "--data", (dir / "empty.jsonl").string()}).code == 2);
  CHECK(cli({"eval", "--checkpoint", (dir / "absent.sfck").string(), "--data", data}).code == 2);
  CHECK(cli({"eval", "--checkpoint", ck, "--data", data, "--q", "1.5"}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("render and compare") {
  const auto dir = scratch("render");
  write(dir / "a.json",
        R"({"image_id": "i", "observer_id": "a", "screen_w": 200, "screen_h": 100,
            "fixations": [[10, 10], [50, 60], [190, 90], [100, 50], [20, 80]]})");
  write(dir / "b.json",
        R"({"image_id": "i", "observer_id": "b", "screen_w": 200, "screen_h": 100,
            "fixations": [[12, 14], [70, 60], [180, 95]]})");
  write(dir / "oob.json",
        R"({"image_id": "i", "observer_id": "c", "screen_w": 200, "screen_h": 100, "fixations": [[10, 10], [500, 60]]})");

  REQUIRE(cli({"render", "--scanpath", (dir / "a.json").string(), "--out", (dir / "a.svg").string()}).code == 0);
  const auto svg = slurp(dir / "a.svg");
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  CHECK(count("<circle") == 5);
  CHECK(count("<line") == 4);
  auto again = cli({"render", "--scanpath", (dir / "a.json").string()});
  CHECK(again.out == svg);
  CHECK(cli({"render", "--scanpath", (dir / "oob.json").string()}).code == 1);
  CHECK(cli({"render", "--scanpath", (dir / "none.json").string()}).code == 2);

  auto cmp = cli({"compare", (dir / "a.json").string(), (dir / "b.json").string()});
  REQUIRE(cmp.code == 0);
  const auto j = json::parse(cmp.out);
  for (const char* k : {"mm_shape", "mm_direction", "mm_length", "mm_position", "mm_mean"}) {
    CHECK(j.at(k).get<double>() >= 0.0);
    CHECK(j.at(k).get<double>() <= 1.0);
  }
  auto rev = cli({"compare", (dir / "b.json").string(), (dir / "a.json").string()});
  CHECK(json::parse(rev.out).at("mm_mean").get<double>() == doctest::Approx(j.at("mm_mean").get<double>()).epsilon(1e-12));
  auto self = cli({"compare", (dir / "a.json").string(), (dir / "a.json").string(), "--simplify-amplitude", "5"});
  CHECK(json::parse(self.out).at("mm_mean").get<double>() == doctest::Approx(1.0));
  fs::remove_all(dir);
}

TEST_CASE("divergent training exits with 3 and names the dump") {
  const auto dir = scratch("diverge");
  const std::string data = (dir / "data").string();
  REQUIRE(cli({"synth", "--images", "4", "--observers", "3", "--out", data}).code == 0);
  write(dir / "cfg.json", R"({"train": {"lr": 1e300, "batch_size": 4, "max_steps": 20}})");
  auto r = cli({"train", "--config", (dir / "cfg.json").string(), "--data", data, "--out", (dir / "run").string()});
  CHECK(r.code == 3);
  const auto pos = r.err.find("diagnostic dump: ");
  REQUIRE(pos != std::string::npos);
  std::string path = r.err.substr(pos + 17);
  path = path.substr(0, path.find('\n'));
  CHECK(fs::exists(path));
  CHECK(json::parse(slurp(path)).contains("non_finite_parameters"));
  fs::remove_all(dir);
}

TEST_CASE("bad config is a usage error") {
  const auto dir = scratch("cfg");
  write(dir / "cfg.json", R"({"train": {"batch": 4}})");
  CHECK(cli({"train", "--config", (dir / "cfg.json").string(), "--data", "x", "--out", (dir / "o").string()}).code == 1);
  write(dir / "broken.json", "{");
  CHECK(cli({"train", "--config", (dir / "broken.json").string(), "--data", "x", "--out", (dir / "o").string()}).code != 0);
  fs::remove_all(dir);
}
