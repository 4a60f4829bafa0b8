// Copyright 2026 The ibra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ibra/cli.hpp"
#include "ibra/mps.hpp"
#include "ibra/report.hpp"
#include "ibra/reward_table.hpp"
#include "json.hpp"

using namespace ibra;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ibra_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kBase = std::string(IBRA_DATA_DIR) + "/knapsack30.mps";

fs::path tiny_file(const fs::path& dir) {
  const fs::path p = dir / "tiny.mps";
  std::ofstream(p) << "NAME tiny\nROWS\n N obj\n L c1\nCOLUMNS\n"
                      "    MARKER 'MARKER' 'INTORG'\n"
                      "    x1 obj -1 c1 1\n    x2 obj -1 c1 2\n"
                      "    MARKER 'MARKER' 'INTEND'\n"
                      "RHS\n    RHS c1 4\nBOUNDS\n UP BND x1 3\n UP BND x2 3\nENDATA\n";
  return p;
}

}  // namespace

TEST_CASE("solve prints the record of the optimal incumbent") {
  const fs::path dir = scratch("solve");
  const auto res = run({"solve", tiny_file(dir).string(), "--model", "count", "--depth", "5"});
  REQUIRE(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["incumbent_value"].get<double>() == -3.0);
  CHECK(j["action"] == "count:5");
  CHECK(j["status"] == "optimal");
}

TEST_CASE("depth zero is the baseline") {
  const fs::path dir = scratch("depth0");
  const std::string file = tiny_file(dir).string();
  const auto a = run({"solve", file, "--model", "dual", "--depth", "0"});
  const auto b = run({"solve", file, "--model", "baseline"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("missing file exits with code two and names the path") {
  const auto res = run({"solve", "/no/such/file.mps"});
  CHECK(res.code == 2);
  CHECK(res.err.find("/no/such/file.mps") != std::string::npos);
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"solve", kBase, "--model", "count"}).code == 2);
  CHECK(run({"solve", kBase, "--model", "nope", "--depth", "2"}).code == 2);
  CHECK(run({"solve", kBase, "--model", "count", "--depth", "9"}).code == 2);
  CHECK(run({"solve", kBase, "--clock", "nodes"}).code == 2);
  CHECK(run({"solve", kBase, "--time-limit", "abc"}).code == 2);
  CHECK(run({"solve", "--help"}).code == 0);
}

TEST_CASE("malformed MPS exits with code two") {
  const fs::path dir = scratch("badmps");
  std::ofstream(dir / "bad.mps") << "NAME x\nROWS\n Q r\nENDATA\n";
  const auto res = run({"solve", (dir / "bad.mps").string()});
  CHECK(res.code == 2);
  CHECK(res.err.find("line 3") != std::string::npos);
}

TEST_CASE("solve exports the root influence graph") {
  const fs::path dir = scratch("graph");
  const auto res = run({"solve", tiny_file(dir).string(), "--model", "count", "--depth", "1",
                        "--export-graph", (dir / "w.csv").string()});
  REQUIRE(res.code == 0);
  CHECK(slurp(dir / "w.csv") == "i,j,w\n0,1,1\n1,0,1\n");
}

TEST_CASE("gen-series writes the files and a sidecar") {
  const fs::path dir = scratch("gen");
  const auto res = run({"gen-series", kBase, "--mode", "obj", "--count", "50", "--seed", "4",
                        "--out", (dir / "s").string()});
  REQUIRE(res.code == 0);
  std::size_t mps = 0;
  for (const auto& e : fs::directory_iterator(dir / "s")) mps += e.path().extension() == ".mps";
  CHECK(mps == 50);
  CHECK(fs::exists(dir / "s" / "series.json"));
}

TEST_CASE("gen-series with zero epsilon copies the base") {
  const fs::path dir = scratch("eps0");
  REQUIRE(run({"gen-series", kBase, "--epsilon", "0", "--count", "3", "--out", dir.string()})
              .code == 0);
  const MipInstance base = read_mps_file(kBase);
  for (int i = 1; i <= 3; ++i) {
    MipInstance inst = read_mps_file(dir / ("knapsack30_" + std::to_string(i) + ".mps"));
    inst.name = base.name;
    CHECK(inst == base);
  }
}

TEST_CASE("gen-series regenerates from its sidecar byte for byte") {
  const fs::path dir = scratch("regen");
  REQUIRE(run({"gen-series", kBase, "--mode", "combined", "--count", "5", "--seed", "12",
               "--out", (dir / "a").string()})
              .code == 0);
  REQUIRE(run({"gen-series", "--from-sidecar", (dir / "a" / "series.json").string(), "--out",
               (dir / "b").string()})
              .code == 0);
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
  }
}

TEST_CASE("run-series requires a time limit on the wall clock") {
  const fs::path dir = scratch("needT");
  REQUIRE(run({"gen-series", kBase, "--count", "2", "--out", dir.string()}).code == 0);
  CHECK(run({"run-series", dir.string()}).code == 2);
  CHECK(run({"run-series", dir.string(), "--clock", "nodes"}).code == 2);
  CHECK(run({"run-series", dir.string(), "--time-limit", "1", "--bandit", "greedy"}).code == 2);
}

TEST_CASE("run-series reports five windows and is reproducible") {
  const fs::path dir = scratch("runs");
  REQUIRE(run({"gen-series", kBase, "--mode", "rhs", "--count", "50", "--seed", "3", "--out",
               (dir / "series").string()})
              .code == 0);
  const std::vector<std::string> common{"run-series", (dir / "series").string(), "--bandit",
                                        "thompson", "--seed", "5", "--clock", "nodes",
                                        "--node-limit", "200", "--with-baseline", "--jobs", "2"};
  auto a_args = common;
  a_args.insert(a_args.end(), {"--out", (dir / "a").string()});
  auto b_args = common;
  b_args.insert(b_args.end(), {"--out", (dir / "b").string()});
  REQUIRE(run(a_args).code == 0);
  REQUIRE(run(b_args).code == 0);
  for (const char* f : {"report.json", "records.csv", "windows.csv"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  REQUIRE(report["windows"].size() == 5);
  for (std::size_t p = 0; p < 5; ++p) {
    CHECK(report["windows"][p]["first"] == 10 * p + 1);
    CHECK(report["windows"][p]["count"] == 10);
  }
  CHECK(report["records"].size() == 50);
  // Speedup column is f(chosen) - f(baseline) on every record.
  for (const auto& r : report["records"]) {
    CHECK(r["speedup"].get<double>() ==
          doctest::Approx(r["f"].get<double>() - r["baseline_f"].get<double>()));
  }
  // The report command recomputes the same windows from the records alone.
  const auto recomputed = run({"report", "--records", (dir / "a" / "records.csv").string(),
                               "--json"});
  REQUIRE(recomputed.code == 0);
  const auto j = nlohmann::json::parse(recomputed.out);
  CHECK(j["windows"] == report["windows"]);
  CHECK(j["overall"] == report["overall"]);
}

TEST_CASE("run-series accepts a list file and writes a reward table") {
  const fs::path dir = scratch("list");
  REQUIRE(run({"gen-series", kBase, "--count", "3", "--out", (dir / "s").string()}).code == 0);
  std::ofstream(dir / "list.txt") << "# three instances\ns/knapsack30_1.mps\ns/knapsack30_2.mps\n"
                                     "s/knapsack30_3.mps\n";
  const auto res = run({"run-series", (dir / "list.txt").string(), "--bandit", "ucb2",
                        "--clock", "nodes", "--node-limit", "100", "--reward-table",
                        (dir / "rewards.csv").string(), "--out", (dir / "o").string()});
  REQUIRE(res.code == 0);
  const RewardTable table = parse_reward_table(slurp(dir / "rewards.csv"));
  CHECK(table.num_instances() == 3);
  CHECK(table.num_arms() == 5);
  const auto records = parse_records_csv(slurp(dir / "o" / "records.csv"));
  REQUIRE(records.size() == 3);
  // Online scores come from the same cached solves as the table.
  for (const auto& r : records) CHECK(r.score.f == table.reward(r.index - 1, r.arm));
}

TEST_CASE("replay writes JSON and the step histogram") {
  const fs::path dir = scratch("replay");
  const double means[] = {0.5, 0.9, 1.0};
  std::ofstream(dir / "r.csv") << format_reward_table(synthetic_reward_table(means, 0.95, 0.2, 20, 1));
  const auto res = run({"replay", "--rewards", (dir / "r.csv").string(), "--bandit", "ucb2",
                        "--runs", "50", "--seed", "2", "--out", dir.string()});
  REQUIRE(res.code == 0);
  const auto summary = nlohmann::json::parse(res.out);
  CHECK(summary["algo"] == "ucb2");
  CHECK(summary["runs"] == 50);
  CHECK(fs::exists(dir / "replay_ucb2.json"));
  CHECK(slurp(dir / "replay_ucb2_histogram.csv").rfind("step,arm_0,arm_1,arm_2\n", 0) == 0);
}

TEST_CASE("replay reports malformed tables with their position") {
  const fs::path dir = scratch("badreplay");
  std::ofstream(dir / "r.csv") << "instance,arm_0,baseline\na,1,oops\n";
  const auto res = run({"replay", "--rewards", (dir / "r.csv").string()});
  CHECK(res.code == 2);
  CHECK(res.err.find("line 2, column 3") != std::string::npos);
}

TEST_CASE("output directory defaults to the environment variable") {
  const fs::path dir = scratch("env");
  ::setenv(kOutDirEnv, dir.string().c_str(), 1);
  const auto res = run({"gen-series", kBase, "--count", "2"});
  ::unsetenv(kOutDirEnv);
  REQUIRE(res.code == 0);
  CHECK(fs::exists(dir / "series" / "knapsack30_2.mps"));
}
