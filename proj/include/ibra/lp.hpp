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

#ifndef IBRA_LP_HPP_
#define IBRA_LP_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ibra/instance.hpp"

namespace ibra {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(LpStatus status);

struct LpOptions {
  double feas_tol = 1e-7;
  double dual_tol = 1e-6;
  double pivot_tol = 1e-9;
  // Reduced-cost threshold used by pricing.
  double optimality_tol = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t stall_threshold = 50;
  std::size_t refactor_interval = 64;
  // 0 selects a limit proportional to the problem size.
  std::size_t max_iterations = 0;
};

// Solution of the LP relaxation. x, y and objective are meaningful only when
// status is kOptimal. y holds one multiplier per row: >= 0 when the row is
// active at its upper side, <= 0 at its lower side, 0 when inactive. With
// d = c + A^T y the reduced costs, d_j > 0 only at l_j and d_j < 0 only at u_j.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  std::vector<double> y;
  double objective = 0.0;
  // Basic columns at termination: j < n structural, n + k the slack of row k,
  // larger indices are phase-one artificials left basic at zero.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

// Raised when the simplex cannot reach a trustworthy answer (iteration guard
// exceeded or a singular basis), never disguised as a status.
class LpNumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves min c^T x s.t. b- <= Ax <= b+, lower <= x <= upper, ignoring
// integrality. The bounds override the instance's variable bounds. The
// reported objective is c^T x without the instance's constant offset.
LpSolution solve_lp(const MipInstance& inst, std::span<const double> lower,
                    std::span<const double> upper, const LpOptions& options = {});

inline LpSolution solve_lp(const MipInstance& inst, const LpOptions& options = {}) {
  return solve_lp(inst, inst.var_lower, inst.var_upper, options);
}

// Reduced costs c + A^T y for a solution's multipliers.
std::vector<double> reduced_costs(const MipInstance& inst, std::span<const double> y);

}  // namespace ibra

#endif  // IBRA_LP_HPP_
