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

#include "ibra/reward_table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace ibra {

RewardTableError::RewardTableError(std::size_t row, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(row) + ", column " + std::to_string(column) +
                         ": " + what),
      row_(row),
      column_(column) {}

RewardTable::RewardTable(std::vector<std::string> instances,
                         std::vector<std::vector<double>> rewards, std::vector<double> baseline)
    : instances_(std::move(instances)), rewards_(std::move(rewards)), baseline_(std::move(baseline)) {
  if (instances_.empty()) throw std::invalid_argument("reward table has no instances");
  if (rewards_.size() != instances_.size() || baseline_.size() != instances_.size()) {
    throw std::invalid_argument("reward table size mismatch");
  }
  num_arms_ = rewards_[0].size();
  if (num_arms_ == 0) throw std::invalid_argument("reward table has no arms");
  for (std::size_t i = 0; i < rewards_.size(); ++i) {
    if (rewards_[i].size() != num_arms_) throw std::invalid_argument("ragged reward table");
    for (double r : rewards_[i]) {
      if (!std::isfinite(r) || r < 0.0) {
        throw std::invalid_argument("rewards must be finite and nonnegative");
      }
    }
    if (!std::isfinite(baseline_[i]) || baseline_[i] < 0.0) {
      throw std::invalid_argument("baseline scores must be finite and nonnegative");
    }
  }
}

double RewardTable::arm_mean(std::size_t arm) const {
  double sum = 0.0;
  for (const auto& row : rewards_) sum += row[arm];
  return sum / static_cast<double>(rewards_.size());
}

double RewardTable::baseline_mean() const {
  double sum = 0.0;
  for (double b : baseline_) sum += b;
  return sum / static_cast<double>(baseline_.size());
}

std::size_t RewardTable::oracle_arm() const {
  std::size_t best = 0;
  double best_mean = arm_mean(0);
  for (std::size_t a = 1; a < num_arms_; ++a) {
    const double m = arm_mean(a);
    if (m < best_mean) {
      best_mean = m;
      best = a;
    }
  }
  return best;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  }
  return out;
}

std::string number_text(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

RewardTable parse_reward_table(std::string_view csv) {
  std::vector<std::string> instances;
  std::vector<std::vector<double>> rewards;
  std::vector<double> baseline;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (columns == 0) {
      if (fields.size() < 3) throw RewardTableError(line_no, 1, "header needs instance, arms and baseline");
      if (fields.front() != "instance") throw RewardTableError(line_no, 1, "first column must be 'instance'");
      if (fields.back() != "baseline") {
        throw RewardTableError(line_no, fields.size(), "last column must be 'baseline'");
      }
      for (std::size_t c = 1; c + 1 < fields.size(); ++c) {
        if (fields[c] != "arm_" + std::to_string(c - 1)) {
          throw RewardTableError(line_no, c + 1, "expected column arm_" + std::to_string(c - 1));
        }
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns) {
      throw RewardTableError(line_no, std::min(fields.size(), columns) + 1,
                             "expected " + std::to_string(columns) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < columns; ++c) {
      double v = 0.0;
      auto f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw RewardTableError(line_no, c + 1, "invalid number '" + std::string(f) + "'");
      }
      if (v < 0.0) throw RewardTableError(line_no, c + 1, "negative score");
      row.push_back(v);
    }
    baseline.push_back(row.back());
    row.pop_back();
    instances.emplace_back(fields[0]);
    rewards.push_back(std::move(row));
  }
  if (columns == 0) throw RewardTableError(1, 1, "missing header");
  if (instances.empty()) throw RewardTableError(line_no, 1, "no data rows");
  return RewardTable(std::move(instances), std::move(rewards), std::move(baseline));
}

std::string format_reward_table(const RewardTable& table) {
  std::ostringstream out;
  out << "instance";
  for (std::size_t a = 0; a < table.num_arms(); ++a) out << ",arm_" << a;
  out << ",baseline\n";
  for (std::size_t i = 0; i < table.num_instances(); ++i) {
    out << table.instance(i);
    for (std::size_t a = 0; a < table.num_arms(); ++a) out << ',' << number_text(table.reward(i, a));
    out << ',' << number_text(table.baseline(i)) << '\n';
  }
  return out.str();
}

RewardTable synthetic_reward_table(std::span<const double> arm_means, double baseline_mean,
                                   double sigma, std::size_t num_instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t k = arm_means.size();
  std::vector<std::vector<double>> columns(k + 1, std::vector<double>(num_instances));
  for (std::size_t c = 0; c <= k; ++c) {
    const double target = c < k ? arm_means[c] : baseline_mean;
    double sum = 0.0;
    for (auto& v : columns[c]) {
      v = noise(rng);
      sum += v;
    }
    const double shift = target - sum / static_cast<double>(num_instances);
    for (auto& v : columns[c]) v = std::max(0.0, v + shift);
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> rewards(num_instances, std::vector<double>(k));
  std::vector<double> baseline(num_instances);
  for (std::size_t i = 0; i < num_instances; ++i) {
    names.push_back("instance_" + std::to_string(i + 1));
    for (std::size_t a = 0; a < k; ++a) rewards[i][a] = columns[a][i];
    baseline[i] = columns[k][i];
  }
  return RewardTable(std::move(names), std::move(rewards), std::move(baseline));
}

}  // namespace ibra
