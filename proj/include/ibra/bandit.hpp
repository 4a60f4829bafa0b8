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

#ifndef IBRA_BANDIT_HPP_
#define IBRA_BANDIT_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "ibra/bnb.hpp"

namespace ibra {

// Arms available to the online learner plus the baseline they are compared
// against.
struct ActionSet {
  std::vector<Action> actions;
  Action baseline = Action::baseline();
  // Index of the best arm when known (e.g. from a recorded reward table).
  std::optional<std::size_t> oracle;

  // (count,1), (count,5), (countdual,2), (binary,3), (dual,3)
  static ActionSet standard();

  std::size_t size() const { return actions.size(); }
};

// Throws std::invalid_argument on an empty set, duplicate pairs, or a
// baseline among the arms.
void validate(const ActionSet& set);

// Parses a comma separated list of "<model>:<depth>" actions.
ActionSet parse_action_set(std::string_view text);

enum class BanditKind { kThompson, kUcb2 };

std::string_view to_string(BanditKind kind);
BanditKind bandit_kind_from_string(std::string_view text);

// Rewards are costs: lower is better.
class BanditPolicy {
 public:
  virtual ~BanditPolicy() = default;
  virtual std::size_t num_arms() const = 0;
  virtual std::size_t select() = 0;
  virtual void update(std::size_t arm, double reward) = 0;
};

struct ThompsonConfig {
  double obs_std = 0.2;
  double prior_mean = 1.0;
  double prior_std = 1.0;
};

struct Posterior {
  double mean = 0.0;
  double variance = 1.0;

  double std() const;
};

// Conjugate normal posterior for a Gaussian reward with known variance
// obs_std^2 after observing the given rewards.
Posterior conjugate_update(Posterior prior, std::span<const double> rewards, double obs_std);

// Gaussian Thompson sampling with known observation noise: sample every
// posterior, play the arm with the smallest draw.
class ThompsonSampler final : public BanditPolicy {
 public:
  ThompsonSampler(std::size_t num_arms, const ThompsonConfig& config, std::uint64_t seed);
  ThompsonSampler(std::vector<Posterior> priors, double obs_std, std::uint64_t seed);

  std::size_t num_arms() const override { return posteriors_.size(); }
  std::size_t select() override;
  void update(std::size_t arm, double reward) override;
  void update_batch(std::size_t arm, std::span<const double> rewards);

  const Posterior& posterior(std::size_t arm) const { return posteriors_[arm]; }
  std::size_t pulls(std::size_t arm) const { return pulls_[arm]; }
  double obs_std() const { return obs_std_; }

 private:
  std::vector<Posterior> posteriors_;
  std::vector<std::size_t> pulls_;
  double obs_std_;
  std::mt19937_64 rng_;
};

// UCB2 of Auer, Cesa-Bianchi and Fischer run on negated rewards: arms are
// played in epochs of tau(r + 1) - tau(r) pulls, tau(r) = ceil((1 + alpha)^r).
class Ucb2 final : public BanditPolicy {
 public:
  explicit Ucb2(std::size_t num_arms, double alpha = 0.1);

  std::size_t num_arms() const override { return means_.size(); }
  std::size_t select() override;
  void update(std::size_t arm, double reward) override;

  double mean(std::size_t arm) const { return means_[arm]; }
  std::size_t pulls(std::size_t arm) const { return pulls_[arm]; }
  std::size_t epochs(std::size_t arm) const { return epochs_[arm]; }
  std::size_t total_pulls() const { return total_; }
  double alpha() const { return alpha_; }

  static std::size_t tau(std::size_t r, double alpha);
  // sqrt((1 + alpha) ln(e n / tau(r)) / (2 tau(r))), radicand clamped at zero.
  static double bonus(std::size_t n, std::size_t r, double alpha);

 private:
  double alpha_;
  std::vector<double> means_;
  std::vector<std::size_t> pulls_;
  std::vector<std::size_t> epochs_;
  std::size_t total_ = 0;
  std::size_t init_cursor_ = 0;
  std::size_t current_ = 0;
  std::size_t pending_ = 0;
};

struct BanditConfig {
  BanditKind kind = BanditKind::kThompson;
  ThompsonConfig thompson;
  double ucb_alpha = 0.1;
};

std::unique_ptr<BanditPolicy> make_policy(const BanditConfig& config, std::size_t num_arms,
                                          std::uint64_t seed);

}  // namespace ibra

#endif  // IBRA_BANDIT_HPP_
