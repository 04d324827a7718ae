#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using hsu2::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hsu2_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& path) { return json::parse(slurp(path)); }

// Drops the timing column so reruns compare equal.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    cells.erase(cells.begin() + 6);
    for (const auto& c : cells) out += c + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("verify passes with defaults and fails at an impossible tolerance") {
  CHECK(run({"verify", "--draws", "50"}) == 0);
  CHECK(run({"verify", "--draws", "5", "--tol", "1e-30"}) == 1);
  CHECK(run({"verify", "--draws", "5", "--h", "3"}) == 0);
  CHECK(run({"verify", "--h", "4"}) == 2);
}

TEST_CASE("evolve reports the gate form") {
  const auto dir = scratch("evolve");
  const auto cfg = write(dir / "free.json", R"({"effective": {"J": 1, "q": 1, "ampl": 0}, "n": 100})");
  REQUIRE(run({"evolve", "--config", cfg.string(), "--out", (dir / "free").string()}) == 0);
  const json out = read_json(dir / "free" / "evolve.json");
  CHECK(out["gate"]["A"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out["gate"]["phi"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(fs::exists(dir / "free" / "evolve.manifest.json"));

  const double amp = std::numbers::pi * std::numbers::pi / 4;
  const auto cfg2 = write(dir / "flip.json", R"({"effective": {"J": 0, "q": 1, "ampl": )" + std::to_string(amp) +
                                                 R"(}, "n": 100})");
  REQUIRE(run({"evolve", "--config", cfg2.string(), "--out", (dir / "flip").string()}) == 0);
  CHECK(read_json(dir / "flip" / "evolve.json")["gate"]["A"].get<double>() < 5e-4);

  const auto cfg3 = write(dir / "fine.json", R"({"effective": {"J": 0, "q": 1, "ampl": )" + std::to_string(amp) +
                                                 R"(}, "n": 2000})");
  REQUIRE(run({"evolve", "--config", cfg3.string(), "--out", (dir / "fine").string()}) == 0);
  CHECK(read_json(dir / "fine" / "evolve.json")["gate"]["A"].get<double>() < 1e-5);
}

TEST_CASE("evolve accepts the model route") {
  const auto dir = scratch("model");
  const auto cfg = write(dir / "m.json",
                         R"({"model": {"h": 1, "J": [0.3, -0.7, 1.1], "B1": 0.4, "B2": -0.2}, "block": 2,
                             "field": {"kind": "half-sine", "amplitude": 1.5}, "n": 200, "order": "linear"})");
  REQUIRE(run({"evolve", "--config", cfg.string(), "--out", dir.string()}) == 0);
  const json out = read_json(dir / "evolve.json");
  const double a = out["gate"]["A"], b = out["gate"]["B"];
  CHECK(a * a + b * b == doctest::Approx(1.0));
}

TEST_CASE("evolve rejects bad configs with exit code 2") {
  const auto dir = scratch("bad");
  CHECK(run({"evolve", "--config", write(dir / "n0.json", R"({"effective": {"J": 1, "ampl": 1}, "n": 0})").string(),
             "--out", dir.string()}) == 2);
  CHECK(run({"evolve", "--config", write(dir / "broken.json", R"({"effective": {"J": 1,)").string(), "--out",
             dir.string()}) == 2);
  CHECK(run({"evolve", "--config", write(dir / "order.json", R"({"effective": {"J": 1, "ampl": 1}, "order": "cubic"})")
                                      .string(),
             "--out", dir.string()}) == 2);
  CHECK(run({"evolve", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(run({"nosuchcommand"}) == 2);
}

TEST_CASE("bench is deterministic under a fixed seed") {
  const auto dir = scratch("bench");
  const auto cfg = write(dir / "b.json", R"({"samples": 16, "nValues": [10, 100]})");
  REQUIRE(run({"bench", "--config", cfg.string(), "--seed", "11", "--out", (dir / "a").string()}) == 0);
  REQUIRE(run({"bench", "--config", (dir / "a" / "bench.manifest.json").string(), "--out", (dir / "b").string()}) == 0);
  const std::string a = slurp(dir / "a" / "bench.csv");
  CHECK(a.rfind("order,n,samples,mean_p,median_p,min_p,mean_time_s,skipped\n", 0) == 0);
  CHECK(without_timing(a) == without_timing(slurp(dir / "b" / "bench.csv")));
  CHECK(a.find("quadratic,100,16,") != std::string::npos);
  CHECK(read_json(dir / "a" / "bench.manifest.json")["seed"].get<std::uint64_t>() == 11);
}

TEST_CASE("scan writes contour points and reproduces from its manifest") {
  const auto dir = scratch("scan");
  const auto cfg = write(dir / "s.json", R"({"gridResolution": 21, "n": 400, "recheck": false})");
  REQUIRE(run({"scan", "--config", cfg.string(), "--target-a", "0,0.5", "--out", (dir / "a").string()}) == 0);
  REQUIRE(run({"scan", "--config", (dir / "a" / "scan.manifest.json").string(), "--out", (dir / "b").string()}) == 0);
  const std::string a = slurp(dir / "a" / "scan.csv");
  CHECK(a == slurp(dir / "b" / "scan.csv"));
  CHECK(slurp(dir / "a" / "scan_polylines.csv") == slurp(dir / "b" / "scan_polylines.csv"));
  CHECK(a.rfind("target_A,q,ampl,J,A,B,phi,theta,varphi,residual\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') > 10);

  const json m = read_json(dir / "a" / "scan.manifest.json");
  CHECK(m["command"] == "scan");
  CHECK(m["outputs"].contains("scan.csv"));
  CHECK(run({"scan", "--target-a", "1.5", "--out", (dir / "c").string()}) == 2);
}
