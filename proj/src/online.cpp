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

#include "ibra/online.hpp"

#include <exception>

namespace ibra {

double weighted_objective(std::span<const double> scores) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += (1.0 + 0.1 * static_cast<double>(i + 1)) * scores[i];
  }
  return total;
}

OnlineRun run_series_online(std::span<const MipInstance> series, BanditPolicy& policy,
                            const ActionSet& actions, const SolveFn& solve_fn) {
  validate(actions);
  if (series.empty()) throw std::invalid_argument("series is empty");
  if (policy.num_arms() != actions.size()) {
    throw std::invalid_argument("policy and action set disagree on the arm count");
  }
  OnlineRun run;
  std::vector<double> scores;
  for (std::size_t i = 0; i < series.size(); ++i) {
    OnlineStep step;
    step.index = i + 1;
    step.instance = series[i].name;
    step.arm = policy.select();
    step.action = actions.actions[step.arm];
    try {
      const SolveResult res = solve_fn(i, series[i], step.action);
      step.score = res.score;
      step.status = std::string(to_string(res.status));
      step.incumbent_value = res.incumbent_value;
    } catch (const std::exception& e) {
      step.score = make_score(1.0, 1.0, 1.0, 0);
      step.status = "error";
      step.error = e.what();
    }
    policy.update(step.arm, step.score.f);
    scores.push_back(step.score.f);
    run.steps.push_back(std::move(step));
  }
  run.weighted_objective = weighted_objective(scores);
  return run;
}

OnlineRun run_series_online(std::span<const MipInstance> series, BanditPolicy& policy,
                            const ActionSet& actions, const SearchParams& params) {
  return run_series_online(series, policy, actions,
                           [&](std::size_t, const MipInstance& inst, const Action& action) {
                             return solve(inst, action, params);
                           });
}

}  // namespace ibra
