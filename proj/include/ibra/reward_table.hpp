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

#ifndef IBRA_REWARD_TABLE_HPP_
#define IBRA_REWARD_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ibra {

class RewardTableError : public std::runtime_error {
 public:
  RewardTableError(std::size_t row, std::size_t column, const std::string& what);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Recorded scores f_i(a) of every arm on every instance of a series, plus
// the baseline column. Replays bandits without solving anything.
class RewardTable {
 public:
  RewardTable() = default;
  RewardTable(std::vector<std::string> instances, std::vector<std::vector<double>> rewards,
              std::vector<double> baseline);

  std::size_t num_instances() const { return instances_.size(); }
  std::size_t num_arms() const { return num_arms_; }
  const std::string& instance(std::size_t i) const { return instances_[i]; }
  double reward(std::size_t i, std::size_t arm) const { return rewards_[i][arm]; }
  double baseline(std::size_t i) const { return baseline_[i]; }

  double arm_mean(std::size_t arm) const;
  double baseline_mean() const;
  // Arm with the smallest mean score, lowest index on ties.
  std::size_t oracle_arm() const;

 private:
  std::vector<std::string> instances_;
  std::vector<std::vector<double>> rewards_;
  std::vector<double> baseline_;
  std::size_t num_arms_ = 0;
};

// CSV with header "instance,arm_0,...,arm_<K-1>,baseline". Errors carry the
// 1-based line and column.
RewardTable parse_reward_table(std::string_view csv);
std::string format_reward_table(const RewardTable& table);

// Independent Gaussian scores N(mean, sigma) per instance and arm. Each column
// is shifted so that its sample mean equals the requested mean exactly; values
// are then floored at zero.
RewardTable synthetic_reward_table(std::span<const double> arm_means, double baseline_mean,
                                   double sigma, std::size_t num_instances, std::uint64_t seed);

}  // namespace ibra

#endif  // IBRA_REWARD_TABLE_HPP_
