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

#include "ibra/influence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ibra {

std::string_view to_string(InfluenceModel model) {
  switch (model) {
    case InfluenceModel::kCount: return "count";
    case InfluenceModel::kBinary: return "binary";
    case InfluenceModel::kDual: return "dual";
    case InfluenceModel::kCountDual: return "countdual";
    case InfluenceModel::kAuxiliary: return "auxiliary";
    case InfluenceModel::kAdversarial: return "adversarial";
  }
  return "?";
}

InfluenceModel influence_model_from_string(std::string_view text) {
  for (auto model : kAllInfluenceModels) {
    if (to_string(model) == text) return model;
  }
  throw std::invalid_argument("unknown influence model '" + std::string(text) + "'");
}

bool needs_lp(InfluenceModel model) {
  return model != InfluenceModel::kCount && model != InfluenceModel::kBinary;
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

namespace {

// A deviation this small relative to the largest magnitude is summation
// noise on a constant vector.
bool nonzero_spread(double sigma, double max_abs) {
  return sigma > 1e-12 * max_abs && sigma > 0.0;
}

}  // namespace

NormalizedInstance normalize(const MipInstance& inst) {
  NormalizedInstance norm;
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_rows();
  norm.objective = inst.objective;
  double cmax = 0.0;
  for (double c : norm.objective) cmax = std::max(cmax, std::abs(c));
  const double sc = population_std(norm.objective);
  if (nonzero_spread(sc, cmax)) {
    for (double& c : norm.objective) c /= sc;
  }

  norm.rows = inst.rows;
  norm.b.resize(m);
  std::vector<double> dense(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double up = inst.row_upper[k];
    const double lo = inst.row_lower[k];
    norm.b[k] = (std::isfinite(up) ? up : 0.0) - (std::isfinite(lo) ? lo : 0.0);
    if (norm.b[k] != 0.0) {
      norm.rows.scale_row(k, 1.0 / norm.b[k]);
      continue;
    }
    auto row = inst.rows.row(k);
    if (row.empty()) continue;
    std::fill(dense.begin(), dense.end(), 0.0);
    double amax = 0.0;
    for (const auto& e : row) {
      dense[e.col] = e.value;
      amax = std::max(amax, std::abs(e.value));
    }
    const double sa = population_std(dense);
    if (nonzero_spread(sa, amax)) norm.rows.scale_row(k, 1.0 / sa);
  }
  return norm;
}

double bound_distance(double x, double lower, double upper) {
  const bool has_lo = std::isfinite(lower);
  const bool has_up = std::isfinite(upper);
  if (!has_lo && !has_up) return 1.0;
  double s = kInf;
  if (has_lo) s = std::min(s, x - lower);
  if (has_up) s = std::min(s, upper - x);
  return std::max(s, 0.0);
}

namespace {

void require_lp(InfluenceModel model, const NodeLp* lp) {
  if (needs_lp(model) && lp == nullptr) {
    throw std::invalid_argument("influence model '" + std::string(to_string(model)) +
                                "' needs an LP solution");
  }
}

bool dual_nonzero(double y) { return std::abs(y) > kDualNonzeroTol; }

// Rows that contain both i and j.
std::size_t shared_rows(const NormalizedInstance& norm, std::size_t i, std::size_t j) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < norm.num_rows(); ++k) {
    if (norm.rows.coefficient(k, i) != 0.0 && norm.rows.coefficient(k, j) != 0.0) ++count;
  }
  return count;
}

}  // namespace

double local_influence(InfluenceModel model, const NormalizedInstance& norm,
                       std::size_t row, std::size_t i, std::size_t j, const NodeLp* lp) {
  if (i == j) throw std::invalid_argument("local influence needs i != j");
  require_lp(model, lp);
  const double a_li = norm.rows.coefficient(row, i);
  const double a_lj = norm.rows.coefficient(row, j);
  if (a_li == 0.0 || a_lj == 0.0) return 0.0;
  switch (model) {
    case InfluenceModel::kCount:
      return 1.0;
    case InfluenceModel::kBinary:
      return 1.0 / static_cast<double>(shared_rows(norm, i, j));
    case InfluenceModel::kDual:
      return std::abs(lp->y[row]);
    case InfluenceModel::kCountDual:
      return dual_nonzero(lp->y[row]) ? 1.0 : 0.0;
    case InfluenceModel::kAuxiliary:
      return bound_distance(lp->x[i], lp->lower[i], lp->upper[i]) * std::abs(a_li * lp->y[row]);
    case InfluenceModel::kAdversarial:
      if (!dual_nonzero(lp->y[row])) return 0.0;
      return bound_distance(lp->x[i], lp->lower[i], lp->upper[i]) * std::abs(a_li / a_lj);
  }
  return 0.0;
}

InfluenceGraph::InfluenceGraph(std::size_t n, InfluenceModel model,
                               std::vector<std::size_t> offsets, std::vector<Arc> arcs)
    : n_(n), model_(model), offsets_(std::move(offsets)), arcs_(std::move(arcs)) {
  if (offsets_.size() != n_ + 1 || offsets_.back() != arcs_.size()) {
    throw std::invalid_argument("inconsistent influence graph layout");
  }
}

double InfluenceGraph::weight(std::size_t i, std::size_t j) const {
  auto arcs = out_arcs(i);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j,
                             [](const Arc& a, std::size_t t) { return a.target < t; });
  return (it != arcs.end() && it->target == j) ? it->weight : 0.0;
}

double InfluenceGraph::out_weight(std::size_t i) const {
  double sum = 0.0;
  for (const auto& a : out_arcs(i)) sum += a.weight;
  return sum;
}

std::vector<std::vector<double>> InfluenceGraph::to_dense() const {
  std::vector<std::vector<double>> dense(n_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (const auto& a : out_arcs(i)) dense[i][a.target] = a.weight;
  }
  return dense;
}

void InfluenceGraph::write_csv(std::ostream& out) const {
  out << "i,j,w\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < n_; ++i) {
    for (const auto& a : out_arcs(i)) out << i << ',' << a.target << ',' << a.weight << '\n';
  }
  out.precision(old_precision);
}

namespace {

struct Triplet {
  std::size_t i;
  std::size_t j;
  double w;
};

}  // namespace

InfluenceGraph build_graph(InfluenceModel model, const NormalizedInstance& norm,
                           const NodeLp* lp) {
  require_lp(model, lp);
  const std::size_t n = norm.num_vars();
  std::vector<double> s;
  if (model == InfluenceModel::kAuxiliary || model == InfluenceModel::kAdversarial) {
    s.resize(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = bound_distance(lp->x[i], lp->lower[i], lp->upper[i]);
  }

  std::vector<Triplet> triplets;
  for (std::size_t l = 0; l < norm.num_rows(); ++l) {
    auto row = norm.rows.row(l);
    if (row.size() < 2) continue;
    const double y = lp != nullptr ? lp->y[l] : 0.0;
    if (needs_lp(model) && !dual_nonzero(y) && model != InfluenceModel::kDual) continue;
    for (const auto& ei : row) {
      for (const auto& ej : row) {
        if (ei.col == ej.col) continue;
        double w = 0.0;
        switch (model) {
          case InfluenceModel::kCount:
          case InfluenceModel::kBinary:
          case InfluenceModel::kCountDual: w = 1.0; break;
          case InfluenceModel::kDual: w = std::abs(y); break;
          case InfluenceModel::kAuxiliary: w = s[ei.col] * std::abs(ei.value * y); break;
          case InfluenceModel::kAdversarial: w = s[ei.col] * std::abs(ei.value / ej.value); break;
        }
        if (w != 0.0) triplets.push_back({ei.col, ej.col, w});
      }
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<InfluenceGraph::Arc> arcs;
  for (std::size_t p = 0; p < triplets.size();) {
    const std::size_t i = triplets[p].i;
    const std::size_t j = triplets[p].j;
    double sum = 0.0;
    std::size_t shared = 0;
    for (; p < triplets.size() && triplets[p].i == i && triplets[p].j == j; ++p) {
      sum += triplets[p].w;
      ++shared;
    }
    // Binary: sum over the shared rows of 1/shared.
    if (model == InfluenceModel::kBinary) sum /= static_cast<double>(shared);
    arcs.push_back({j, sum});
    ++offsets[i + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  return InfluenceGraph(n, model, std::move(offsets), std::move(arcs));
}

std::vector<double> total_influence(const InfluenceGraph& graph,
                                    const NormalizedInstance& norm) {
  if (graph.num_vars() != norm.num_vars()) {
    throw std::invalid_argument("graph and normalized instance disagree on size");
  }
  std::vector<double> w(graph.num_vars());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::sqrt(std::max(0.0, 1.0 + norm.objective[i])) * graph.out_weight(i);
  }
  return w;
}

std::size_t select_branch_var(std::span<const double> scores,
                              std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw std::invalid_argument("no branching candidates");
  std::size_t best = candidates[0];
  for (std::size_t c : candidates) {
    if (scores[c] > scores[best] || (scores[c] == scores[best] && c < best)) best = c;
  }
  return best;
}

}  // namespace ibra
