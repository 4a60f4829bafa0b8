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

#ifndef IBRA_REPORT_HPP_
#define IBRA_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ibra/bnb.hpp"
#include "json.hpp"

namespace ibra {

// One solved instance of one online run.
struct InstanceRecord {
  std::size_t run = 0;    // 0-based repetition
  std::size_t index = 0;  // 1-based position in the series
  std::string instance;
  std::size_t arm = 0;
  std::string action;
  Score score;
  std::string status;
  std::optional<double> incumbent_value;
  std::optional<double> baseline_f;
  std::optional<std::string> error;

  // f(chosen) - f(baseline); negative is better.
  std::optional<double> speedup() const;
};

// Averages over the records whose index lies in [first, last].
struct WindowStats {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t count = 0;
  double f = 0.0;
  double reltime = 0.0;
  double gap = 0.0;
  double nofeas = 0.0;
  double tree_size = 0.0;
  std::optional<double> speedup;
};

// Splits positions 1..length into `parts` consecutive windows whose sizes
// differ by at most one (earlier windows take the remainder).
std::vector<std::pair<std::size_t, std::size_t>> batch_windows(std::size_t length,
                                                               std::size_t parts = 5);

WindowStats window_stats(const std::vector<InstanceRecord>& records, std::size_t first,
                         std::size_t last);

struct SeriesReport {
  std::string bandit;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::size_t length = 0;
  std::vector<InstanceRecord> records;
  WindowStats overall;
  std::vector<WindowStats> windows;
  // Across runs: mean of the per-run average f and its standard error.
  double mean_f = 0.0;
  double stderr_f = 0.0;
  std::vector<double> weighted_objectives;
  std::optional<double> mean_speedup;
  std::optional<double> stderr_speedup;
  nlohmann::ordered_json settings;
};

// Every aggregate is derived from the records.
SeriesReport build_report(std::string bandit, std::uint64_t seed,
                          std::vector<InstanceRecord> records);

nlohmann::ordered_json to_json(const SeriesReport& report);
std::string records_csv(const std::vector<InstanceRecord>& records);
std::vector<InstanceRecord> parse_records_csv(std::string_view csv);
std::string windows_csv(const SeriesReport& report);
// Fixed-width table: one row per metric, columns overall then each window.
std::string format_table(const SeriesReport& report);

}  // namespace ibra

#endif  // IBRA_REPORT_HPP_
