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

#include "ibra/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ibra {

ActionSet ActionSet::standard() {
  ActionSet set;
  set.actions = {make_action(InfluenceModel::kCount, 1), make_action(InfluenceModel::kCount, 5),
                 make_action(InfluenceModel::kCountDual, 2),
                 make_action(InfluenceModel::kBinary, 3), make_action(InfluenceModel::kDual, 3)};
  return set;
}

void validate(const ActionSet& set) {
  if (set.actions.empty()) throw std::invalid_argument("action set is empty");
  for (std::size_t a = 0; a < set.actions.size(); ++a) {
    validate(set.actions[a]);
    if (set.actions[a].is_baseline()) {
      throw std::invalid_argument("the baseline cannot be an arm");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (set.actions[a] == set.actions[b]) {
        throw std::invalid_argument("duplicate action " + to_string(set.actions[a]));
      }
    }
  }
  if (set.oracle && *set.oracle >= set.actions.size()) {
    throw std::invalid_argument("oracle index out of range");
  }
}

ActionSet parse_action_set(std::string_view text) {
  ActionSet set;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    set.actions.push_back(parse_action(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  validate(set);
  return set;
}

std::string_view to_string(BanditKind kind) {
  return kind == BanditKind::kThompson ? "thompson" : "ucb2";
}

BanditKind bandit_kind_from_string(std::string_view text) {
  if (text == "thompson") return BanditKind::kThompson;
  if (text == "ucb2") return BanditKind::kUcb2;
  throw std::invalid_argument("unknown bandit '" + std::string(text) + "'");
}

double Posterior::std() const { return std::sqrt(variance); }

Posterior conjugate_update(Posterior prior, std::span<const double> rewards, double obs_std) {
  const double obs_var = obs_std * obs_std;
  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double precision = 1.0 / prior.variance + static_cast<double>(rewards.size()) / obs_var;
  Posterior post;
  post.mean = (prior.mean / prior.variance + sum / obs_var) / precision;
  post.variance = 1.0 / precision;
  return post;
}

ThompsonSampler::ThompsonSampler(std::size_t num_arms, const ThompsonConfig& config,
                                 std::uint64_t seed)
    : ThompsonSampler(std::vector<Posterior>(num_arms, Posterior{config.prior_mean,
                                                                 config.prior_std * config.prior_std}),
                      config.obs_std, seed) {}

ThompsonSampler::ThompsonSampler(std::vector<Posterior> priors, double obs_std,
                                 std::uint64_t seed)
    : posteriors_(std::move(priors)), pulls_(posteriors_.size(), 0), obs_std_(obs_std), rng_(seed) {
  if (posteriors_.empty()) throw std::invalid_argument("Thompson sampling needs an arm");
  if (!(obs_std > 0.0)) throw std::invalid_argument("observation std must be positive");
  for (const auto& p : posteriors_) {
    if (!(p.variance > 0.0)) throw std::invalid_argument("prior variance must be positive");
  }
}

std::size_t ThompsonSampler::select() {
  std::size_t best = 0;
  double best_draw = kInf;
  for (std::size_t a = 0; a < posteriors_.size(); ++a) {
    std::normal_distribution<double> dist(posteriors_[a].mean, posteriors_[a].std());
    const double draw = dist(rng_);
    if (draw < best_draw) {
      best_draw = draw;
      best = a;
    }
  }
  return best;
}

void ThompsonSampler::update(std::size_t arm, double reward) {
  const double r[] = {reward};
  update_batch(arm, r);
}

void ThompsonSampler::update_batch(std::size_t arm, std::span<const double> rewards) {
  if (arm >= posteriors_.size()) throw std::out_of_range("arm index out of range");
  for (double r : rewards) {
    if (!std::isfinite(r)) throw std::invalid_argument("reward must be finite");
  }
  posteriors_[arm] = conjugate_update(posteriors_[arm], rewards, obs_std_);
  pulls_[arm] += rewards.size();
}

Ucb2::Ucb2(std::size_t num_arms, double alpha)
    : alpha_(alpha), means_(num_arms, 0.0), pulls_(num_arms, 0), epochs_(num_arms, 0) {
  if (num_arms == 0) throw std::invalid_argument("UCB2 needs an arm");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("UCB2 alpha must lie in (0, 1)");
}

std::size_t Ucb2::tau(std::size_t r, double alpha) {
  return static_cast<std::size_t>(std::ceil(std::pow(1.0 + alpha, static_cast<double>(r))));
}

double Ucb2::bonus(std::size_t n, std::size_t r, double alpha) {
  const double t = static_cast<double>(tau(r, alpha));
  const double radicand =
      (1.0 + alpha) * std::log(std::numbers::e * static_cast<double>(n) / t) / (2.0 * t);
  return std::sqrt(std::max(0.0, radicand));
}

std::size_t Ucb2::select() {
  if (init_cursor_ < means_.size()) return init_cursor_++;
  if (pending_ > 0) {
    --pending_;
    return current_;
  }
  const std::size_t n = std::max<std::size_t>(total_, 1);
  for (;;) {
    std::size_t best = 0;
    double best_index = -kInf;
    for (std::size_t a = 0; a < means_.size(); ++a) {
      const double index = -means_[a] + bonus(n, epochs_[a], alpha_);
      if (index > best_index) {
        best_index = index;
        best = a;
      }
    }
    const std::size_t length = tau(epochs_[best] + 1, alpha_) - tau(epochs_[best], alpha_);
    ++epochs_[best];
    if (length > 0) {
      current_ = best;
      pending_ = length - 1;
      return best;
    }
  }
}

void Ucb2::update(std::size_t arm, double reward) {
  if (arm >= means_.size()) throw std::out_of_range("arm index out of range");
  if (!std::isfinite(reward)) throw std::invalid_argument("reward must be finite");
  ++pulls_[arm];
  ++total_;
  means_[arm] += (reward - means_[arm]) / static_cast<double>(pulls_[arm]);
}

std::unique_ptr<BanditPolicy> make_policy(const BanditConfig& config, std::size_t num_arms,
                                          std::uint64_t seed) {
  if (config.kind == BanditKind::kThompson) {
    return std::make_unique<ThompsonSampler>(num_arms, config.thompson, seed);
  }
  return std::make_unique<Ucb2>(num_arms, config.ucb_alpha);
}

}  // namespace ibra
