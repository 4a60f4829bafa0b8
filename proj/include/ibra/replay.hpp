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

#ifndef IBRA_REPLAY_HPP_
#define IBRA_REPLAY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ibra/bandit.hpp"
#include "ibra/reward_table.hpp"
#include "json.hpp"

namespace ibra {

// One online decision: which recorded instance was served and which arm the
// bandit played on it.
struct Step {
  std::size_t instance = 0;
  std::size_t arm = 0;
};

// Realized speedup over the baseline divided by the speedup of always playing
// the table's best-mean arm:
//   CS = sum_i (f_i(a_i) - f_i(a0)) / sum_i (f_i(a*) - f_i(a0)).
// Returns nullopt when the denominator vanishes (|den| < 1e-12).
std::optional<double> convergence_score(std::span<const Step> trajectory,
                                        const RewardTable& table);

struct ReplayConfig {
  BanditConfig bandit;
  std::size_t runs = 10000;
  std::uint64_t seed = 0;
};

struct ReplayReport {
  BanditKind kind = BanditKind::kThompson;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::size_t num_arms = 0;
  std::size_t optimal_arm = 0;
  // histograms[t][a]: runs that played arm a at step t.
  std::vector<std::vector<std::size_t>> histograms;
  std::optional<double> mean_cs;
  double cs_std = 0.0;
  // First run's trajectory, kept for inspection.
  std::vector<Step> first_trajectory;

  double final_step_frequency(std::size_t arm) const;
};

// Each run shuffles the instance order, then lets a fresh bandit pick an arm
// per instance and observe the recorded score. Run r draws its shuffle and
// sampling streams from the seed sequence (seed, r).
ReplayReport replay(const RewardTable& table, const ReplayConfig& config);

// {algo, runs, seed, mean_cs, cs_std, optimal_arm, final_step_frequency,
//  per_step_histograms}
nlohmann::ordered_json to_json(const ReplayReport& report);

// "step,arm_0,...,arm_<K-1>" counts, one row per step (1-based).
std::string histogram_csv(const ReplayReport& report);

}  // namespace ibra

#endif  // IBRA_REPLAY_HPP_
