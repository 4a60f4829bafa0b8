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

#ifndef IBRA_INFLUENCE_HPP_
#define IBRA_INFLUENCE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ibra/instance.hpp"
#include "ibra/lp.hpp"

namespace ibra {

// Local influence models. Count and Binary read only the sparsity pattern;
// the other four also consume the LP solution of the current node.
enum class InfluenceModel { kCount, kBinary, kDual, kCountDual, kAuxiliary, kAdversarial };

inline constexpr InfluenceModel kAllInfluenceModels[] = {
    InfluenceModel::kCount,     InfluenceModel::kBinary,    InfluenceModel::kDual,
    InfluenceModel::kCountDual, InfluenceModel::kAuxiliary, InfluenceModel::kAdversarial};

std::string_view to_string(InfluenceModel model);
InfluenceModel influence_model_from_string(std::string_view text);
bool needs_lp(InfluenceModel model);

// |y_l| above this counts as a nonzero dual.
inline constexpr double kDualNonzeroTol = 1e-9;

// Copy of the instance data with c and the rows of A rescaled so that the
// influence graph does not depend on the problem's scaling. The instance that
// is solved is never touched.
struct NormalizedInstance {
  std::vector<double> objective;
  SparseMatrix rows;
  // b_k = [|b+_k| < inf] b+_k - [|b-_k| < inf] b-_k
  std::vector<double> b;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return b.size(); }
};

// Population standard deviation of a dense vector.
double population_std(std::span<const double> values);

NormalizedInstance normalize(const MipInstance& inst);

// LP information at the current node: primal point, row duals and the node's
// variable bounds (used for the distance-to-bound term s_i).
struct NodeLp {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> lower;
  std::span<const double> upper;
};

// s_i: distance from x_i to its nearest finite bound, 1 when both are infinite.
double bound_distance(double x, double lower, double upper);

// w^l_ij of the given model. Throws std::invalid_argument if a dual model is
// requested without LP data, or if i == j.
double local_influence(InfluenceModel model, const NormalizedInstance& norm,
                       std::size_t row, std::size_t i, std::size_t j,
                       const NodeLp* lp = nullptr);

// Weighted directed graph of direct influences w_ij = sum_l w^l_ij (i != j),
// stored as compressed rows sorted by target.
class InfluenceGraph {
 public:
  struct Arc {
    std::size_t target;
    double weight;
  };

  InfluenceGraph() = default;
  InfluenceGraph(std::size_t n, InfluenceModel model, std::vector<std::size_t> offsets,
                 std::vector<Arc> arcs);

  std::size_t num_vars() const { return n_; }
  InfluenceModel model() const { return model_; }
  std::span<const Arc> out_arcs(std::size_t i) const {
    return {arcs_.data() + offsets_[i], arcs_.data() + offsets_[i + 1]};
  }
  std::size_t num_arcs() const { return arcs_.size(); }
  double weight(std::size_t i, std::size_t j) const;
  double out_weight(std::size_t i) const;
  std::vector<std::vector<double>> to_dense() const;

  // Sparse triplet CSV with header "i,j,w".
  void write_csv(std::ostream& out) const;

 private:
  std::size_t n_ = 0;
  InfluenceModel model_ = InfluenceModel::kCount;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
};

// Accumulates local influences row by row over each row's support.
InfluenceGraph build_graph(InfluenceModel model, const NormalizedInstance& norm,
                           const NodeLp* lp = nullptr);

// w_i = sqrt(1 + c_i) * sum_{j != i} w_ij with the normalized c; the radicand
// is clamped at zero.
std::vector<double> total_influence(const InfluenceGraph& graph,
                                    const NormalizedInstance& norm);

// Argmax of scores over candidates, lowest index on ties.
std::size_t select_branch_var(std::span<const double> scores,
                              std::span<const std::size_t> candidates);

}  // namespace ibra

#endif  // IBRA_INFLUENCE_HPP_
