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

#include "ibra/replay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ibra {

std::optional<double> convergence_score(std::span<const Step> trajectory,
                                        const RewardTable& table) {
  const std::size_t best = table.oracle_arm();
  double num = 0.0;
  double den = 0.0;
  for (const auto& step : trajectory) {
    num += table.reward(step.instance, step.arm) - table.baseline(step.instance);
    den += table.reward(step.instance, best) - table.baseline(step.instance);
  }
  if (std::abs(den) < 1e-12) return std::nullopt;
  return num / den;
}

double ReplayReport::final_step_frequency(std::size_t arm) const {
  if (histograms.empty() || runs == 0) return 0.0;
  return static_cast<double>(histograms.back()[arm]) / static_cast<double>(runs);
}

ReplayReport replay(const RewardTable& table, const ReplayConfig& config) {
  const std::size_t steps = table.num_instances();
  const std::size_t arms = table.num_arms();
  ReplayReport report;
  report.kind = config.bandit.kind;
  report.runs = config.runs;
  report.seed = config.seed;
  report.num_arms = arms;
  report.optimal_arm = table.oracle_arm();
  report.histograms.assign(steps, std::vector<std::size_t>(arms, 0));

  std::vector<std::size_t> order(steps);
  std::vector<Step> trajectory(steps);
  double cs_sum = 0.0;
  double cs_sq = 0.0;
  std::size_t cs_count = 0;
  for (std::size_t run = 0; run < config.runs; ++run) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(run),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(run) >> 32)};
    std::mt19937_64 rng(seq);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto policy = make_policy(config.bandit, arms, rng());
    for (std::size_t t = 0; t < steps; ++t) {
      const std::size_t arm = policy->select();
      policy->update(arm, table.reward(order[t], arm));
      trajectory[t] = {order[t], arm};
      ++report.histograms[t][arm];
    }
    if (run == 0) report.first_trajectory = trajectory;
    if (auto cs = convergence_score(trajectory, table)) {
      cs_sum += *cs;
      cs_sq += *cs * *cs;
      ++cs_count;
    }
  }
  if (cs_count > 0) {
    const double mean = cs_sum / static_cast<double>(cs_count);
    report.mean_cs = mean;
    report.cs_std = std::sqrt(std::max(0.0, cs_sq / static_cast<double>(cs_count) - mean * mean));
  }
  return report;
}

nlohmann::ordered_json to_json(const ReplayReport& report) {
  nlohmann::ordered_json j;
  j["algo"] = std::string(to_string(report.kind));
  j["runs"] = report.runs;
  j["seed"] = report.seed;
  if (report.mean_cs) {
    j["mean_cs"] = *report.mean_cs;
  } else {
    j["mean_cs"] = nullptr;
  }
  j["cs_std"] = report.cs_std;
  j["optimal_arm"] = report.optimal_arm;
  std::vector<double> freq;
  for (std::size_t a = 0; a < report.num_arms; ++a) freq.push_back(report.final_step_frequency(a));
  j["final_step_frequency"] = freq;
  j["per_step_histograms"] = report.histograms;
  return j;
}

std::string histogram_csv(const ReplayReport& report) {
  std::ostringstream out;
  out << "step";
  for (std::size_t a = 0; a < report.num_arms; ++a) out << ",arm_" << a;
  out << '\n';
  for (std::size_t t = 0; t < report.histograms.size(); ++t) {
    out << t + 1;
    for (auto c : report.histograms[t]) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

}  // namespace ibra
