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

#ifndef IBRA_ONLINE_HPP_
#define IBRA_ONLINE_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ibra/bandit.hpp"
#include "ibra/bnb.hpp"
#include "ibra/instance.hpp"

namespace ibra {

// Score fed to the bandit when a solve throws: every term at its maximum.
inline constexpr double kFailureScore = 3.0;

// sum_i (1 + 0.1 i) f_i with i starting at 1.
double weighted_objective(std::span<const double> scores);

struct OnlineStep {
  std::size_t index = 0;  // 1-based position in the series
  std::string instance;
  std::size_t arm = 0;
  Action action;
  Score score;
  std::string status;
  std::optional<double> incumbent_value;
  std::optional<std::string> error;
};

struct OnlineRun {
  std::vector<OnlineStep> steps;
  double weighted_objective = 0.0;
};

using SolveFn = std::function<SolveResult(std::size_t index, const MipInstance&, const Action&)>;

// Serves the series in order: the policy picks an arm, the instance is solved
// with that arm's action and the raw score f updates the policy.
OnlineRun run_series_online(std::span<const MipInstance> series, BanditPolicy& policy,
                            const ActionSet& actions, const SolveFn& solve_fn);

// Convenience overload solving with branch and bound.
OnlineRun run_series_online(std::span<const MipInstance> series, BanditPolicy& policy,
                            const ActionSet& actions, const SearchParams& params);

}  // namespace ibra

#endif  // IBRA_ONLINE_HPP_
