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

#include "ibra/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "ibra/bandit.hpp"
#include "ibra/bnb.hpp"
#include "ibra/influence.hpp"
#include "ibra/lp.hpp"
#include "ibra/mps.hpp"
#include "ibra/online.hpp"
#include "ibra/replay.hpp"
#include "ibra/report.hpp"
#include "ibra/reward_table.hpp"
#include "ibra/series.hpp"
#include "json.hpp"

namespace ibra {
namespace {

namespace fs = std::filesystem;

// Bad flags or unusable input files; mapped to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path("ibra_out");
}

void require_file(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("file not found: " + path.string());
}

std::string read_text(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

MipInstance load_instance(const fs::path& path) {
  require_file(path);
  try {
    return read_mps_file(path);
  } catch (const MpsError& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

ClockMode parse_clock(const std::string& text) {
  if (text == "wall") return ClockMode::kWall;
  if (text == "nodes") return ClockMode::kNodes;
  throw UsageError("unknown clock '" + text + "' (expected wall or nodes)");
}

template <class Fn>
auto usage_guard(Fn fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Runs fn(0..n-1) on up to `jobs` threads; fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, const Fn& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  if (jobs == 1) {
    worker();
    return;
  }
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

struct Outcome {
  std::optional<SolveResult> result;
  std::string error;

  double f() const { return result ? result->score.f : kFailureScore; }
};

Outcome guarded_solve(const MipInstance& inst, const Action& action, const SearchParams& params) {
  Outcome o;
  try {
    o.result = solve(inst, action, params);
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

struct SearchFlags {
  std::optional<double> time_limit;
  std::optional<std::size_t> node_limit;
  std::string clock = "wall";
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--time-limit", time_limit, "Time limit per solve in seconds");
    cmd->add_option("--node-limit", node_limit, "Node limit per solve");
    cmd->add_option("--clock", clock, "reltime clock: wall or nodes")->default_str("wall");
  }

  SearchParams params(bool require_time_limit) const {
    SearchParams p;
    p.clock = parse_clock(clock);
    if (time_limit) {
      p.time_limit = *time_limit;
    } else if (require_time_limit && p.clock == ClockMode::kWall) {
      throw UsageError("--time-limit is required unless --clock nodes is used");
    }
    p.node_limit = node_limit;
    p.seed = seed;
    usage_guard([&] {
      validate(p);
      return 0;
    });
    return p;
  }
};

// ---- solve ----

struct SolveCmd {
  std::string file;
  std::string model = "baseline";
  std::optional<int> depth;
  std::string graph_csv;
  SearchFlags search;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("solve", "Solve one MPS instance by branch and bound");
    cmd->add_option("file", file, "MPS file")->required();
    cmd->add_option("--model", model, "Influence model or baseline")->default_str("baseline");
    cmd->add_option("--depth", depth, "Maximal depth for influence branching (0 = baseline)");
    cmd->add_option("--seed", search.seed, "Seed");
    cmd->add_option("--export-graph", graph_csv, "Write the root influence graph as i,j,w CSV");
    search.add_to(cmd);
  }

  Action action() const {
    return usage_guard([&] {
      if (model == "baseline") {
        if (depth && *depth != 0) throw UsageError("--model baseline takes no --depth");
        return Action::baseline();
      }
      const InfluenceModel m = influence_model_from_string(model);
      if (!depth) throw UsageError("--depth is required with --model " + model);
      return make_action(m, *depth);
    });
  }

  int run(std::ostream& out) const {
    const Action act = action();
    const SearchParams params = search.params(false);
    const MipInstance inst = load_instance(file);
    if (!graph_csv.empty()) {
      if (act.is_baseline()) throw UsageError("--export-graph needs an influence model");
      const NormalizedInstance norm = normalize(inst);
      InfluenceGraph graph;
      if (needs_lp(*act.model)) {
        const LpSolution lp = solve_lp(inst, params.lp);
        if (lp.status != LpStatus::kOptimal) {
          throw std::runtime_error("root LP is not optimal; cannot build a dual graph");
        }
        const NodeLp node{lp.x, lp.y, inst.var_lower, inst.var_upper};
        graph = build_graph(*act.model, norm, &node);
      } else {
        graph = build_graph(*act.model, norm);
      }
      std::ostringstream csv;
      graph.write_csv(csv);
      write_text(graph_csv, csv.str());
    }
    const SolveResult res = solve(inst, act, params);
    auto record = solve_record(inst.name, act, res);
    record["dual_bound"] = res.dual_bound;
    record["influence_branchings"] = res.influence_branchings;
    out << record.dump(2) << '\n';
    return kExitOk;
  }
};

// ---- gen-series ----

struct GenSeriesCmd {
  std::string base;
  std::string from_sidecar;
  std::string mode = "obj";
  std::size_t count = 50;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string out_dir;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-series", "Generate a perturbed instance series");
    cmd->add_option("base", base, "Base MPS file");
    cmd->add_option("--from-sidecar", from_sidecar, "Regenerate from a series.json sidecar");
    cmd->add_option("--mode", mode, "bnd, obj, rhs, mat or combined")->default_str("obj");
    cmd->add_option("--count", count, "Number of instances")->default_str("50");
    cmd->add_option("--epsilon", epsilon, "Perturbation half-width")->default_str("0.1");
    cmd->add_option("--seed", seed, "Seed")->default_str("0");
    cmd->add_option("--out", out_dir, "Output directory");
  }

  int run(std::ostream& out) const {
    SeriesSpec spec;
    if (!from_sidecar.empty()) {
      if (!base.empty()) throw UsageError("give either a base file or --from-sidecar");
      const std::string text = read_text(from_sidecar);
      try {
        spec = spec_from_sidecar(nlohmann::json::parse(text));
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(from_sidecar + ": " + e.what());
      } catch (const MpsError& e) {
        throw UsageError(from_sidecar + ": embedded base: " + e.what());
      }
    } else {
      if (base.empty()) throw UsageError("a base MPS file or --from-sidecar is required");
      spec.base_instance = load_instance(base);
      spec.mode = usage_guard([&] { return perturb_mode_from_string(mode); });
      spec.count = count;
      spec.epsilon = epsilon;
      spec.seed = seed;
    }
    usage_guard([&] {
      validate(spec);
      return 0;
    });
    const fs::path dir = out_dir.empty() ? default_out_dir() / "series" : fs::path(out_dir);
    const auto files = write_series(spec, dir);
    nlohmann::ordered_json j;
    j["dir"] = dir.string();
    j["count"] = files.size();
    j["mode"] = std::string(to_string(spec.mode));
    j["epsilon"] = spec.epsilon;
    j["seed"] = spec.seed;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
};

// ---- run-series ----

std::vector<fs::path> resolve_manifest(const fs::path& manifest) {
  require_file(manifest);
  if (fs::is_directory(manifest)) return manifest_files(manifest);
  std::vector<fs::path> out;
  std::istringstream in(read_text(manifest));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    fs::path p = line.substr(start);
    if (p.is_relative()) p = manifest.parent_path() / p;
    out.push_back(p);
  }
  return out;
}

struct RunSeriesCmd {
  std::string manifest;
  std::string bandit = "thompson";
  double sigma = 0.2;
  double alpha = 0.1;
  std::string actions;
  std::size_t runs = 1;
  std::size_t jobs = 1;
  bool with_baseline = false;
  std::string reward_table;
  std::string out_dir;
  SearchFlags search;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("run-series", "Solve a series online with a bandit");
    cmd->add_option("manifest", manifest, "Series directory or text file listing MPS paths")
        ->required();
    cmd->add_option("--bandit", bandit, "thompson or ucb2")->default_str("thompson");
    cmd->add_option("--sigma", sigma, "Thompson observation noise")->default_str("0.2");
    cmd->add_option("--alpha", alpha, "UCB2 epoch parameter")->default_str("0.1");
    cmd->add_option("--actions", actions, "Comma separated <model>:<depth> arms");
    cmd->add_option("--seed", search.seed, "Seed")->default_str("0");
    cmd->add_option("--runs", runs, "Independent repetitions of the online run")
        ->default_str("1");
    cmd->add_option("--jobs", jobs, "Worker threads for precomputed solves")->default_str("1");
    cmd->add_flag("--with-baseline", with_baseline, "Also solve every instance with the baseline");
    cmd->add_option("--reward-table", reward_table,
                    "Solve every arm on every instance and write the reward table CSV");
    cmd->add_option("--out", out_dir, "Output directory");
    search.add_to(cmd);
  }

  int run(std::ostream& out) const {
    BanditConfig config;
    config.kind = usage_guard([&] { return bandit_kind_from_string(bandit); });
    if (!(sigma > 0.0)) throw UsageError("--sigma must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    config.thompson.obs_std = sigma;
    config.ucb_alpha = alpha;
    const ActionSet set =
        actions.empty() ? ActionSet::standard() : usage_guard([&] { return parse_action_set(actions); });
    usage_guard([&] {
      validate(set);
      return 0;
    });
    if (runs == 0) throw UsageError("--runs must be at least 1");
    const std::size_t workers =
        jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    const SearchParams params = search.params(true);

    const auto paths = resolve_manifest(manifest);
    if (paths.empty()) throw UsageError("manifest lists no instances: " + manifest);
    std::vector<MipInstance> series;
    for (const auto& p : paths) series.push_back(load_instance(p));
    const std::size_t n = series.size();
    const std::size_t k = set.size();

    std::vector<std::optional<Outcome>> cache(n * k);
    std::vector<std::optional<Outcome>> baseline(n);
    const bool need_baseline = with_baseline || !reward_table.empty();
    if (need_baseline) {
      parallel_for(n, workers, [&](std::size_t i) {
        baseline[i] = guarded_solve(series[i], set.baseline, params);
      });
    }
    if (!reward_table.empty()) {
      parallel_for(n * k, workers, [&](std::size_t t) {
        cache[t] = guarded_solve(series[t / k], set.actions[t % k], params);
      });
      std::vector<std::string> names;
      std::vector<std::vector<double>> rewards(n, std::vector<double>(k));
      std::vector<double> base_f(n);
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back(series[i].name);
        for (std::size_t a = 0; a < k; ++a) rewards[i][a] = cache[i * k + a]->f();
        base_f[i] = baseline[i]->f();
      }
      write_text(reward_table,
                 format_reward_table(RewardTable(names, std::move(rewards), std::move(base_f))));
    }

    auto solve_fn = [&](std::size_t i, const MipInstance&, const Action& act) -> SolveResult {
      const auto it = std::find(set.actions.begin(), set.actions.end(), act);
      auto& slot = cache[i * k + static_cast<std::size_t>(it - set.actions.begin())];
      if (!slot) slot = guarded_solve(series[i], act, params);
      if (!slot->result) throw std::runtime_error(slot->error);
      return *slot->result;
    };

    std::vector<InstanceRecord> records;
    for (std::size_t r = 0; r < runs; ++r) {
      const std::uint64_t run_seed = search.seed + 0x9E3779B97F4A7C15ULL * r;
      auto policy = make_policy(config, k, run_seed);
      const OnlineRun online = run_series_online(series, *policy, set, solve_fn);
      for (const auto& step : online.steps) {
        InstanceRecord rec;
        rec.run = r;
        rec.index = step.index;
        rec.instance = step.instance;
        rec.arm = step.arm;
        rec.action = to_string(step.action);
        rec.score = step.score;
        rec.status = step.status;
        rec.incumbent_value = step.incumbent_value;
        rec.error = step.error;
        if (need_baseline) rec.baseline_f = baseline[step.index - 1]->f();
        records.push_back(std::move(rec));
      }
    }

    SeriesReport report = build_report(std::string(to_string(config.kind)), search.seed,
                                       std::move(records));
    nlohmann::ordered_json settings;
    auto arms = nlohmann::ordered_json::array();
    for (const auto& a : set.actions) arms.push_back(to_string(a));
    settings["actions"] = arms;
    settings["clock"] = search.clock;
    settings["time_limit"] =
        search.time_limit ? nlohmann::ordered_json(*search.time_limit) : nullptr;
    settings["node_limit"] =
        search.node_limit ? nlohmann::ordered_json(*search.node_limit) : nullptr;
    settings["sigma"] = sigma;
    settings["alpha"] = alpha;
    settings["with_baseline"] = need_baseline;
    auto files = nlohmann::ordered_json::array();
    for (const auto& p : paths) files.push_back(p.filename().string());
    settings["files"] = files;
    report.settings = settings;

    const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
    write_text(dir / "report.json", to_json(report).dump(2) + "\n");
    write_text(dir / "records.csv", records_csv(report.records));
    write_text(dir / "windows.csv", windows_csv(report));
    out << format_table(report);
    out << "weighted objective (run 1): " << report.weighted_objectives.front() << '\n';
    if (report.mean_speedup) {
      out << "mean speedup (negative is better): " << *report.mean_speedup << '\n';
    }
    out << "wrote " << (dir / "report.json").string() << '\n';
    return kExitOk;
  }
};

// ---- replay ----

struct ReplayCmd {
  std::string rewards;
  std::string bandit = "thompson";
  std::size_t runs = 10000;
  std::uint64_t seed = 0;
  double sigma = 0.2;
  double alpha = 0.1;
  std::string out_dir;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("replay", "Replay a bandit on a recorded reward table");
    cmd->add_option("--rewards", rewards, "Reward table CSV")->required();
    cmd->add_option("--bandit", bandit, "thompson or ucb2")->default_str("thompson");
    cmd->add_option("--runs", runs, "Shuffled runs")->default_str("10000");
    cmd->add_option("--seed", seed, "Seed")->default_str("0");
    cmd->add_option("--sigma", sigma, "Thompson observation noise")->default_str("0.2");
    cmd->add_option("--alpha", alpha, "UCB2 epoch parameter")->default_str("0.1");
    cmd->add_option("--out", out_dir, "Output directory");
  }

  int run(std::ostream& out) const {
    ReplayConfig config;
    config.bandit.kind = usage_guard([&] { return bandit_kind_from_string(bandit); });
    if (!(sigma > 0.0)) throw UsageError("--sigma must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    if (runs == 0) throw UsageError("--runs must be at least 1");
    config.bandit.thompson.obs_std = sigma;
    config.bandit.ucb_alpha = alpha;
    config.runs = runs;
    config.seed = seed;
    const std::string text = read_text(rewards);
    RewardTable table;
    try {
      table = parse_reward_table(text);
    } catch (const RewardTableError& e) {
      throw UsageError(rewards + ": " + e.what());
    }
    const ReplayReport report = replay(table, config);
    const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
    const std::string stem = "replay_" + bandit;
    auto j = to_json(report);
    write_text(dir / (stem + ".json"), j.dump(2) + "\n");
    write_text(dir / (stem + "_histogram.csv"), histogram_csv(report));
    j.erase("per_step_histograms");
    out << j.dump(2) << '\n';
    return kExitOk;
  }
};

// ---- report ----

struct ReportCmd {
  std::string records;
  bool json = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("report", "Recompute batch windows from a records CSV");
    cmd->add_option("--records", records, "records.csv written by run-series")->required();
    cmd->add_flag("--json", json, "Print the full JSON report");
  }

  int run(std::ostream& out) const {
    const std::string text = read_text(records);
    std::vector<InstanceRecord> recs;
    try {
      recs = parse_records_csv(text);
    } catch (const std::runtime_error& e) {
      throw UsageError(records + ": " + e.what());
    }
    if (recs.empty()) throw UsageError(records + ": no records");
    const SeriesReport report = build_report("", 0, std::move(recs));
    if (json) {
      auto j = to_json(report);
      j.erase("bandit");
      j.erase("seed");
      out << j.dump(2) << '\n';
    } else {
      out << format_table(report);
    }
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Influence branching with online bandit selection"};
  app.name("ibra");
  app.require_subcommand(1);
  SolveCmd solve_cmd;
  GenSeriesCmd gen_cmd;
  RunSeriesCmd run_cmd;
  ReplayCmd replay_cmd;
  ReportCmd report_cmd;
  solve_cmd.add(app);
  gen_cmd.add(app);
  run_cmd.add(app);
  replay_cmd.add(app);
  report_cmd.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("solve")) return solve_cmd.run(out);
    if (app.got_subcommand("gen-series")) return gen_cmd.run(out);
    if (app.got_subcommand("run-series")) return run_cmd.run(out);
    if (app.got_subcommand("replay")) return replay_cmd.run(out);
    if (app.got_subcommand("report")) return report_cmd.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ibra
