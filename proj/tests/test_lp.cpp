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

#include <cmath>
#include <random>

#include "doctest.h"
#include "ibra/lp.hpp"
#include "oracles.hpp"

using namespace ibra;

namespace {

MipInstance two_var() {
  return make_instance("two", {-1.0, -1.0}, {{{0, 1.0}, {1, 2.0}}}, {-kInf}, {4.0}, {0.0, 0.0},
                       {3.0, kInf}, {false, false});
}

}  // namespace

TEST_CASE("two-variable LP reaches (3, 0.5)") {
  const MipInstance inst = two_var();
  const LpSolution sol = solve_lp(inst);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.x[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(-3.5).epsilon(1e-12));
  const auto oracle = testing::vertex_enumeration(inst, inst.var_lower, inst.var_upper);
  REQUIRE(oracle);
  CHECK(*oracle == doctest::Approx(-3.5));
  // The row is active at its upper side, so its multiplier is nonnegative.
  CHECK(sol.y[0] == doctest::Approx(0.5));
  const auto d = reduced_costs(inst, sol.y);
  CHECK(d[0] == doctest::Approx(-0.5));
  CHECK(d[1] == doctest::Approx(0.0));
}

TEST_CASE("empty box is infeasible") {
  const MipInstance inst =
      make_instance("box", {1.0}, {}, {}, {}, {0.0}, {5.0}, {false});
  const std::vector<double> lo{2.0}, up{1.0};
  CHECK(solve_lp(inst, lo, up).status == LpStatus::kInfeasible);
}

TEST_CASE("contradictory rows are infeasible") {
  const MipInstance inst = make_instance("inf", {1.0, 1.0}, {{{0, 1.0}, {1, 1.0}}, {{0, 1.0}}},
                                         {5.0, -kInf}, {kInf, 1.0}, {0.0, 0.0}, {kInf, 2.0},
                                         {false, false});
  CHECK(solve_lp(inst).status == LpStatus::kInfeasible);
}

TEST_CASE("free ray without rows is unbounded") {
  const MipInstance inst = make_instance("ray", {-1.0}, {}, {}, {}, {0.0}, {kInf}, {false});
  CHECK(solve_lp(inst).status == LpStatus::kUnbounded);
}

TEST_CASE("unbounded direction through a row") {
  const MipInstance inst = make_instance("ray2", {-1.0, 0.0}, {{{0, 1.0}, {1, -1.0}}}, {-kInf},
                                         {1.0}, {0.0, 0.0}, {kInf, kInf}, {false, false});
  CHECK(solve_lp(inst).status == LpStatus::kUnbounded);
}

TEST_CASE("free variables and equality rows") {
  // min x + y  s.t.  x - y = 1, x + y >= 3, x, y free.
  const MipInstance inst =
      make_instance("free", {1.0, 1.0}, {{{0, 1.0}, {1, -1.0}}, {{0, 1.0}, {1, 1.0}}},
                    {1.0, 3.0}, {1.0, kInf}, {-kInf, -kInf}, {kInf, kInf}, {false, false});
  const LpSolution sol = solve_lp(inst);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(testing::check_duality(inst, inst.var_lower, inst.var_upper, sol).worst() < 1e-9);
}

TEST_CASE("LP objective excludes the constant offset") {
  MipInstance inst = two_var();
  inst.objective_offset = 10.0;
  CHECK(solve_lp(inst).objective == doctest::Approx(-3.5));
}

TEST_CASE("random LPs match vertex enumeration and satisfy duality") {
  std::mt19937_64 rng(7);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 250; ++t) {
    const MipInstance inst = testing::random_lp(rng);
    const auto oracle = testing::vertex_enumeration(inst, inst.var_lower, inst.var_upper);
    const LpSolution sol = solve_lp(inst);
    INFO("case " << t);
    if (!oracle) {
      CHECK(sol.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(sol.status == LpStatus::kOptimal);
    ++optimal;
    CHECK(std::abs(sol.objective - *oracle) <= 1e-6 * std::max(1.0, std::abs(*oracle)));
    const auto rep = testing::check_duality(inst, inst.var_lower, inst.var_upper, sol);
    CHECK(rep.primal_infeasibility <= 1e-6);
    CHECK(rep.dual_infeasibility <= 1e-6);
    CHECK(rep.complementarity <= 1e-6);
    CHECK(rep.duality_gap <= 1e-6);
  }
  CHECK(optimal > 150);
  CHECK(infeasible > 5);
}

TEST_CASE("node bounds override the instance bounds") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 60; ++t) {
    const MipInstance inst = testing::random_lp(rng, 5, 4);
    std::vector<double> lo = inst.var_lower, up = inst.var_upper;
    const std::size_t j = rng() % inst.num_vars();
    const double mid = 0.5 * (lo[j] + up[j]);
    if (t % 2 == 0) {
      up[j] = mid;
    } else {
      lo[j] = mid;
    }
    const auto oracle = testing::vertex_enumeration(inst, lo, up);
    const LpSolution sol = solve_lp(inst, lo, up);
    if (!oracle) {
      CHECK(sol.status == LpStatus::kInfeasible);
      continue;
    }
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(*oracle).epsilon(1e-6));
    CHECK(testing::check_duality(inst, lo, up, sol).worst() <= 1e-6);
  }
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const MipInstance inst = testing::random_lp(rng);
    const LpSolution a = solve_lp(inst);
    const LpSolution b = solve_lp(inst);
    CHECK(a.status == b.status);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.basis == b.basis);
  }
}

TEST_CASE("degenerate LP terminates") {
  // Many constraints through the origin.
  std::vector<std::vector<Entry>> rows;
  std::vector<double> rl, ru;
  for (int k = 1; k <= 8; ++k) {
    rows.push_back({{0, static_cast<double>(k)}, {1, -1.0}, {2, 1.0 / k}});
    rl.push_back(-kInf);
    ru.push_back(0.0);
  }
  const MipInstance inst = make_instance("deg", {-1.0, -1.0, -1.0}, rows, rl, ru,
                                         {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {false, false, false});
  const LpSolution sol = solve_lp(inst);
  REQUIRE(sol.status == LpStatus::kOptimal);
  const auto oracle = testing::vertex_enumeration(inst, inst.var_lower, inst.var_upper);
  REQUIRE(oracle);
  CHECK(sol.objective == doctest::Approx(*oracle));
}

TEST_CASE("iteration guard raises a numerical error") {
  LpOptions opts;
  opts.max_iterations = 1;
  std::mt19937_64 rng(5);
  bool raised = false;
  for (int t = 0; t < 20 && !raised; ++t) {
    try {
      solve_lp(testing::random_lp(rng), opts);
    } catch (const LpNumericalError&) {
      raised = true;
    }
  }
  CHECK(raised);
}
