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

#include "ibra/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace ibra {

Action make_action(InfluenceModel model, int depth) {
  if (depth == 0) return Action::baseline();
  Action a{model, depth};
  validate(a);
  return a;
}

void validate(const Action& action) {
  if (action.is_baseline()) {
    if (action.max_depth != 0) throw std::invalid_argument("baseline action must have depth 0");
    return;
  }
  if (action.max_depth < 1 || action.max_depth > kMaxInfluenceDepth) {
    throw std::invalid_argument("max depth must lie in [1, 6]");
  }
}

std::string to_string(const Action& action) {
  if (action.is_baseline()) return "baseline";
  return std::string(to_string(*action.model)) + ":" + std::to_string(action.max_depth);
}

Action parse_action(std::string_view text) {
  if (text == "baseline") return Action::baseline();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("action must be 'baseline' or '<model>:<depth>'");
  }
  const auto model = influence_model_from_string(text.substr(0, colon));
  int depth = 0;
  try {
    std::size_t used = 0;
    const std::string digits(text.substr(colon + 1));
    depth = std::stoi(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid depth in action '" + std::string(text) + "'");
  }
  return make_action(model, depth);
}

void validate(const SearchParams& params) {
  if (!(params.time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (params.node_limit && *params.node_limit == 0) {
    throw std::invalid_argument("node limit must be positive");
  }
  if (params.clock == ClockMode::kNodes && !params.node_limit) {
    throw std::invalid_argument("node clock requires a node limit");
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNodeLimit: return "node_limit";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

Score make_score(double reltime, double gap, double nofeas, std::size_t tree_size) {
  return Score{reltime, gap, nofeas, tree_size, reltime + gap + nofeas};
}

double relative_gap(std::optional<double> primal, double dual_bound) {
  if (!primal) return 1.0;
  const double denom = std::max({std::abs(*primal), std::abs(dual_bound), 1e-10});
  return std::clamp(std::abs(*primal - dual_bound) / denom, 0.0, 1.0);
}

std::size_t most_fractional(std::span<const double> x, std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("no branching candidates");
  std::size_t best = candidates[0];
  double best_frac = -1.0;
  for (std::size_t j : candidates) {
    const double f = x[j] - std::floor(x[j]);
    const double score = std::min(f, 1.0 - f);
    if (score > best_frac || (score == best_frac && j < best)) {
      best_frac = score;
      best = j;
    }
  }
  return best;
}

namespace {

struct Node {
  double bound;
  std::size_t seq;
  int depth;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

class Search {
 public:
  Search(const MipInstance& inst, const Action& action, const SearchParams& params)
      : inst_(inst), action_(action), params_(params) {
    if (!action.is_baseline()) {
      norm_ = normalize(inst);
      if (!needs_lp(*action.model)) {
        static_scores_ = total_influence(build_graph(*action.model, *norm_), *norm_);
      }
    }
  }

  SolveResult run() {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    SolveResult result;
    std::priority_queue<Node, std::vector<Node>, WorseNode> open;
    open.push(Node{-kInf, seq_++, 0, inst_.var_lower, inst_.var_upper});
    std::size_t nodes = 0;
    bool stopped = false;

    auto global_bound = [&] {
      double db = open.empty() ? kInf : open.top().bound;
      if (incumbent_) db = std::min(db, *incumbent_);
      return db;
    };

    while (!open.empty()) {
      if (incumbent_ && relative_gap(incumbent_, global_bound()) <= params_.gap_tol) {
        // Remaining nodes cannot improve beyond the tolerance.
        break;
      }
      if (params_.node_limit && nodes >= *params_.node_limit) {
        result.status = SolveStatus::kNodeLimit;
        stopped = true;
        break;
      }
      if (params_.clock == ClockMode::kWall && std::isfinite(params_.time_limit) &&
          elapsed() >= params_.time_limit) {
        result.status = SolveStatus::kTimeLimit;
        stopped = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (prunable(node.bound)) continue;
      ++nodes;

      LpSolution lp;
      try {
        lp = solve_lp(inst_, node.lower, node.upper, params_.lp);
      } catch (const LpNumericalError& e) {
        if (node.depth == 0) throw SolveError(std::string("root LP failed: ") + e.what());
        ++result.lp_failures;
        trace(result, nodes, global_bound());
        continue;
      }
      if (lp.status == LpStatus::kUnbounded) {
        if (node.depth == 0) {
          result.status = SolveStatus::kUnbounded;
          stopped = true;
          break;
        }
        ++result.lp_failures;
        continue;
      }
      if (lp.status == LpStatus::kInfeasible) {
        trace(result, nodes, global_bound());
        continue;
      }

      const double bound = std::max(lp.objective, node.bound);
      if (prunable(bound)) {
        trace(result, nodes, global_bound());
        continue;
      }

      std::vector<std::size_t> candidates;
      for (std::size_t j = 0; j < inst_.num_vars(); ++j) {
        if (!inst_.integer_mask[j]) continue;
        if (std::abs(lp.x[j] - std::round(lp.x[j])) > params_.int_tol) candidates.push_back(j);
      }
      if (candidates.empty()) {
        incumbent_ = lp.objective;
        incumbent_x_ = lp.x;
        for (std::size_t j = 0; j < inst_.num_vars(); ++j) {
          if (inst_.integer_mask[j]) incumbent_x_[j] = std::round(incumbent_x_[j]);
        }
        trace(result, nodes, global_bound());
        continue;
      }

      std::size_t var;
      if (!action_.is_baseline() && node.depth <= action_.max_depth) {
        var = influence_choice(lp, node, candidates);
        ++result.influence_branchings;
      } else {
        var = most_fractional(lp.x, candidates);
      }

      Node down{bound, seq_++, node.depth + 1, node.lower, node.upper};
      down.upper[var] = std::floor(lp.x[var]);
      Node up{bound, seq_++, node.depth + 1, std::move(node.lower), std::move(node.upper)};
      up.lower[var] = std::ceil(lp.x[var]);
      open.push(std::move(down));
      open.push(std::move(up));
      trace(result, nodes, global_bound());
    }

    result.elapsed_seconds = elapsed();
    const double offset = inst_.objective_offset;
    if (incumbent_) {
      result.incumbent_value = *incumbent_ + offset;
      result.incumbent = incumbent_x_;
    }
    if (!stopped) result.status = incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;

    const bool solved = result.status == SolveStatus::kOptimal ||
                        result.status == SolveStatus::kInfeasible;
    double db = global_bound();
    if (result.status == SolveStatus::kUnbounded) db = -kInf;
    result.dual_bound = std::isfinite(db) ? db + offset : db;

    double reltime = 0.0;
    if (params_.clock == ClockMode::kNodes) {
      const double limit = static_cast<double>(*params_.node_limit);
      reltime = std::min(static_cast<double>(nodes), limit) / limit;
    } else if (std::isfinite(params_.time_limit)) {
      reltime = std::min(result.elapsed_seconds, params_.time_limit) / params_.time_limit;
    }
    double gap = 0.0;
    double nofeas = 0.0;
    if (!solved) {
      if (!incumbent_) {
        nofeas = 1.0;
        gap = 1.0;
      } else {
        gap = std::isfinite(result.dual_bound)
                  ? relative_gap(result.incumbent_value, result.dual_bound)
                  : 1.0;
      }
    }
    result.score = make_score(reltime, gap, nofeas, nodes);
    return result;
  }

 private:
  bool prunable(double bound) const {
    return incumbent_ && bound >= *incumbent_ - 1e-9 * std::max(1.0, std::abs(*incumbent_));
  }

  std::size_t influence_choice(const LpSolution& lp, const Node& node,
                               const std::vector<std::size_t>& candidates) const {
    if (!needs_lp(*action_.model)) return select_branch_var(static_scores_, candidates);
    const NodeLp view{lp.x, lp.y, node.lower, node.upper};
    const auto graph = build_graph(*action_.model, *norm_, &view);
    return select_branch_var(total_influence(graph, *norm_), candidates);
  }

  void trace(SolveResult& result, std::size_t nodes, double bound) const {
    if (params_.record_trace) result.trace.push_back({nodes, bound, incumbent_});
  }

  const MipInstance& inst_;
  Action action_;
  SearchParams params_;
  std::optional<NormalizedInstance> norm_;
  std::vector<double> static_scores_;
  std::optional<double> incumbent_;
  std::vector<double> incumbent_x_;
  std::size_t seq_ = 0;
};

}  // namespace

SolveResult solve(const MipInstance& inst, const Action& action, const SearchParams& params) {
  validate(action);
  validate(params);
  return Search(inst, action, params).run();
}

nlohmann::ordered_json solve_record(const std::string& instance, const Action& action,
                                    const SolveResult& result) {
  nlohmann::ordered_json j;
  j["instance"] = instance;
  j["action"] = to_string(action);
  j["reltime"] = result.score.reltime;
  j["gap"] = result.score.gap;
  j["nofeas"] = result.score.nofeas;
  j["tree_size"] = result.score.tree_size;
  j["f"] = result.score.f;
  j["status"] = std::string(to_string(result.status));
  if (result.incumbent_value) {
    j["incumbent_value"] = *result.incumbent_value;
  } else {
    j["incumbent_value"] = nullptr;
  }
  return j;
}

}  // namespace ibra
