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

#ifndef IBRA_BNB_HPP_
#define IBRA_BNB_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ibra/influence.hpp"
#include "ibra/instance.hpp"
#include "ibra/lp.hpp"
#include "json.hpp"

namespace ibra {

inline constexpr int kMaxInfluenceDepth = 6;

// A branching configuration: an influence model applied while the node depth
// is at most max_depth. The baseline never uses influence branching.
struct Action {
  std::optional<InfluenceModel> model;
  int max_depth = 0;

  static Action baseline() { return {}; }
  bool is_baseline() const { return !model.has_value(); }

  friend bool operator==(const Action&, const Action&) = default;
};

// depth == 0 yields the baseline; otherwise 1 <= depth <= 6 is enforced.
Action make_action(InfluenceModel model, int depth);
void validate(const Action& action);

// "baseline" or "<model>:<depth>".
std::string to_string(const Action& action);
Action parse_action(std::string_view text);

// How reltime is measured. kNodes replaces the wall clock by the processed
// node count (reltime = nodes / node_limit) so runs are reproducible.
enum class ClockMode { kWall, kNodes };

struct SearchParams {
  double time_limit = kInf;
  std::optional<std::size_t> node_limit;
  double int_tol = 1e-6;
  double gap_tol = 1e-6;
  std::uint64_t seed = 0;
  ClockMode clock = ClockMode::kWall;
  bool record_trace = false;
  LpOptions lp;
};

void validate(const SearchParams& params);

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimit, kNodeLimit, kUnbounded };

std::string_view to_string(SolveStatus status);

struct Score {
  double reltime = 0.0;
  double gap = 0.0;
  double nofeas = 0.0;
  std::size_t tree_size = 0;
  double f = 0.0;
};

// Assembles a Score; f is the exact sum of its three terms.
Score make_score(double reltime, double gap, double nofeas, std::size_t tree_size);

// |primal - dual| / max(|primal|, |dual|, 1e-10) clamped to [0, 1]; 1 without
// a primal value.
double relative_gap(std::optional<double> primal, double dual_bound);

struct TracePoint {
  std::size_t nodes = 0;
  double dual_bound = -kInf;
  std::optional<double> incumbent;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  Score score;
  std::optional<double> incumbent_value;
  std::vector<double> incumbent;
  double dual_bound = -kInf;
  double elapsed_seconds = 0.0;
  // Nodes fathomed because their LP broke down; nonzero values weaken the
  // reported dual bound.
  std::size_t lp_failures = 0;
  std::size_t influence_branchings = 0;
  std::vector<TracePoint> trace;
};

// LP breakdown at the root node.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Best-bound branch and bound. Nodes at depth <= max_depth branch on the
// fractional integer variable of maximal total influence; deeper nodes and the
// baseline use most-fractional branching.
SolveResult solve(const MipInstance& inst, const Action& action, const SearchParams& params);

// Most fractional candidate, lowest index on ties.
std::size_t most_fractional(std::span<const double> x, std::span<const std::size_t> candidates);

// {instance, action, reltime, gap, nofeas, tree_size, f, status, incumbent_value}
nlohmann::ordered_json solve_record(const std::string& instance, const Action& action,
                                    const SolveResult& result);

}  // namespace ibra

#endif  // IBRA_BNB_HPP_
