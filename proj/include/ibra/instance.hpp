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

#ifndef IBRA_INSTANCE_HPP_
#define IBRA_INSTANCE_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ibra {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One nonzero of a sparse row.
struct Entry {
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Row-major sparse matrix. Entries of a row are sorted by column and never
// hold an explicit zero, so the sparsity pattern is exact.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t num_rows, std::size_t num_cols);

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return num_cols_; }
  std::size_t num_nonzeros() const;

  std::span<const Entry> row(std::size_t r) const { return rows_[r]; }

  // Replaces row r. Zero values are dropped, entries sorted by column.
  // Throws std::invalid_argument on duplicate or out-of-range columns.
  void set_row(std::size_t r, std::vector<Entry> entries);

  // Scales every stored value of row r; the factor must be nonzero.
  void scale_row(std::size_t r, double factor);

  // Mutable access to the values of row r; the pattern stays fixed.
  std::span<Entry> mutable_row(std::size_t r) { return rows_[r]; }

  double coefficient(std::size_t r, std::size_t c) const;

  // Column-wise view: for each column, the (row, value) pairs in row order.
  std::vector<std::vector<Entry>> columns() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t num_cols_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

// A minimization MIP  min c^T x  s.t.  b- <= Ax <= b+,  l <= x <= u,
// x_j integral for integer_mask[j].
struct MipInstance {
  std::string name;
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;
  std::vector<double> objective;
  double objective_offset = 0.0;
  SparseMatrix rows;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  std::vector<bool> integer_mask;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return row_lower.size(); }

  friend bool operator==(const MipInstance&, const MipInstance&) = default;
};

// Throws std::invalid_argument describing the first violated invariant.
void validate(const MipInstance& inst);

// Builds an instance with default names and validates it.
MipInstance make_instance(std::string name, std::vector<double> objective,
                          std::vector<std::vector<Entry>> rows,
                          std::vector<double> row_lower,
                          std::vector<double> row_upper,
                          std::vector<double> var_lower,
                          std::vector<double> var_upper,
                          std::vector<bool> integer_mask);

// True when the sparsity patterns of the two matrices coincide.
bool same_pattern(const SparseMatrix& a, const SparseMatrix& b);

double row_activity(std::span<const Entry> row, std::span<const double> x);

}  // namespace ibra

#endif  // IBRA_INSTANCE_HPP_
