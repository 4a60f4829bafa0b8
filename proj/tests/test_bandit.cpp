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
#include <vector>

#include "doctest.h"
#include "ibra/bandit.hpp"

using namespace ibra;

namespace {

// Hand formula for one observation.
Posterior hand_update(Posterior p, double r, double sigma) {
  const double s2 = sigma * sigma;
  const double mean = (p.mean / p.variance + r / s2) / (1.0 / p.variance + 1.0 / s2);
  return {mean, 1.0 / (1.0 / p.variance + 1.0 / s2)};
}

}  // namespace

TEST_CASE("conjugate update reproduces the worked example") {
  const double r[] = {0.8};
  const Posterior post = conjugate_update({1.0, 1.0}, r, 0.2);
  CHECK(std::abs(post.mean - 21.0 / 26.0) <= 1e-12);
  CHECK(std::abs(post.variance - 1.0 / 26.0) <= 1e-12);
}

TEST_CASE("reward equal to the mean keeps the mean and shrinks the variance") {
  const double r[] = {1.0};
  const Posterior post = conjugate_update({1.0, 1.0}, r, 0.2);
  CHECK(post.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(post.variance < 1.0);
}

TEST_CASE("update matches the hand formula on random inputs") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const Posterior prior{u(rng), 0.01 + u(rng)};
    const double r = u(rng);
    const double sigma = 0.05 + u(rng);
    const double rs[] = {r};
    const Posterior a = conjugate_update(prior, rs, sigma);
    const Posterior b = hand_update(prior, r, sigma);
    CHECK(std::abs(a.mean - b.mean) <= 1e-12);
    CHECK(std::abs(a.variance - b.variance) <= 1e-12);
  }
}

TEST_CASE("batched updates equal sequential updates") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> rewards(1 + t % 7);
    for (double& r : rewards) r = u(rng);
    ThompsonSampler seq(1, {}, 0), batch(1, {}, 0);
    for (double r : rewards) seq.update(0, r);
    batch.update_batch(0, rewards);
    CHECK(std::abs(seq.posterior(0).mean - batch.posterior(0).mean) <= 1e-12);
    CHECK(std::abs(seq.posterior(0).variance - batch.posterior(0).variance) <= 1e-12);
    CHECK(seq.pulls(0) == rewards.size());
  }
}

TEST_CASE("posterior variance decreases and the mean stays between prior and data") {
  ThompsonSampler ts(1, {}, 3);
  double prev_var = ts.posterior(0).variance;
  double sum = 0.0;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.7, 0.2);
  for (int n = 1; n <= 50; ++n) {
    const double r = noise(rng);
    sum += r;
    ts.update(0, r);
    CHECK(ts.posterior(0).variance < prev_var);
    prev_var = ts.posterior(0).variance;
    const double emp = sum / n;
    CHECK(ts.posterior(0).mean >= std::min(1.0, emp) - 1e-12);
    CHECK(ts.posterior(0).mean <= std::max(1.0, emp) + 1e-12);
  }
}

TEST_CASE("near-degenerate posteriors pick the smallest mean") {
  std::vector<Posterior> priors;
  for (double m : {0.8, 0.9, 1.0, 1.1, 1.2}) priors.push_back({m, 1e-24});
  ThompsonSampler ts(priors, 0.2, 5);
  int zero = 0;
  for (int t = 0; t < 1000; ++t) zero += ts.select() == 0 ? 1 : 0;
  CHECK(zero >= 990);
}

TEST_CASE("identical posteriors are chosen uniformly") {
  ThompsonSampler ts(5, {}, 6);
  std::vector<int> counts(5, 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) ++counts[ts.select()];
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(draws) - 0.2) <= 0.03);
}

TEST_CASE("single-arm set always plays that arm") {
  ThompsonSampler ts(1, {}, 7);
  Ucb2 ucb(1);
  for (int t = 0; t < 20; ++t) {
    CHECK(ts.select() == 0);
    ts.update(0, 1.0);
    CHECK(ucb.select() == 0);
    ucb.update(0, 1.0);
  }
}

TEST_CASE("Thompson is reproducible for a fixed seed") {
  ThompsonSampler a(5, {}, 42), b(5, {}, 42);
  for (int t = 0; t < 200; ++t) {
    const auto x = a.select();
    CHECK(x == b.select());
    a.update(x, 0.1 * static_cast<double>(x));
    b.update(x, 0.1 * static_cast<double>(x));
  }
}

TEST_CASE("Thompson input validation") {
  CHECK_THROWS_AS(ThompsonSampler(0, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(ThompsonSampler(2, {0.0, 1.0, 1.0}, 0), std::invalid_argument);
  ThompsonSampler ts(2, {}, 0);
  CHECK_THROWS_AS(ts.update(2, 1.0), std::out_of_range);
  CHECK_THROWS_AS(ts.update(0, std::nan("")), std::invalid_argument);
}

TEST_CASE("UCB2 plays every arm once first") {
  Ucb2 ucb(5);
  for (std::size_t a = 0; a < 5; ++a) {
    CHECK(ucb.select() == a);
    ucb.update(a, 1.0);
  }
}

TEST_CASE("UCB2 epoch schedule") {
  CHECK(Ucb2::tau(0, 0.1) == 1);
  CHECK(Ucb2::tau(1, 0.1) == 2);
  CHECK(Ucb2::tau(1, 0.1) - Ucb2::tau(0, 0.1) == 1);
  CHECK(Ucb2::tau(2, 0.1) == 2);
  CHECK(Ucb2::tau(8, 0.1) == 3);
  // Bonus radicand ln(e n / tau) / (2 tau) * (1 + alpha).
  CHECK(Ucb2::bonus(10, 0, 0.1) ==
        doctest::Approx(std::sqrt(1.1 * std::log(std::exp(1.0) * 10.0) / 2.0)));
  CHECK(Ucb2::bonus(1, 40, 0.1) == 0.0);
}

TEST_CASE("UCB2 concentrates on the cheaper of two arms") {
  Ucb2 ucb(2);
  for (int t = 0; t < 50; ++t) {
    const auto a = ucb.select();
    ucb.update(a, a == 0 ? 0.5 : 1.5);
  }
  CHECK(ucb.pulls(0) >= 35);
  CHECK(ucb.total_pulls() == 50);
}

TEST_CASE("UCB2 epochs grow with repeated selection") {
  Ucb2 ucb(3);
  for (int t = 0; t < 400; ++t) {
    const auto a = ucb.select();
    ucb.update(a, a == 1 ? 0.2 : 0.9);
  }
  CHECK(ucb.pulls(1) > ucb.pulls(0));
  CHECK(ucb.pulls(1) > ucb.pulls(2));
  CHECK(ucb.epochs(1) > ucb.epochs(0));
  CHECK(ucb.mean(1) == doctest::Approx(0.2));
}

TEST_CASE("UCB2 is deterministic") {
  Ucb2 a(4), b(4);
  for (int t = 0; t < 100; ++t) {
    const auto x = a.select();
    CHECK(x == b.select());
    a.update(x, 1.0 / (1.0 + x));
    b.update(x, 1.0 / (1.0 + x));
  }
}

TEST_CASE("action sets") {
  const ActionSet set = ActionSet::standard();
  REQUIRE(set.size() == 5);
  CHECK(to_string(set.actions[0]) == "count:1");
  CHECK(to_string(set.actions[1]) == "count:5");
  CHECK(to_string(set.actions[2]) == "countdual:2");
  CHECK(to_string(set.actions[3]) == "binary:3");
  CHECK(to_string(set.actions[4]) == "dual:3");
  CHECK(set.baseline.is_baseline());
  CHECK(parse_action_set("dual:1,auxiliary:4").size() == 2);
  CHECK_THROWS_AS(parse_action_set("dual:1,dual:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_action_set("baseline"), std::invalid_argument);
  CHECK_THROWS_AS(parse_action_set(""), std::invalid_argument);
  CHECK(bandit_kind_from_string("ucb2") == BanditKind::kUcb2);
  CHECK_THROWS_AS(bandit_kind_from_string("egreedy"), std::invalid_argument);
}
