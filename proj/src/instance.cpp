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

#include "ibra/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ibra {

SparseMatrix::SparseMatrix(std::size_t num_rows, std::size_t num_cols)
    : num_cols_(num_cols), rows_(num_rows) {}

std::size_t SparseMatrix::num_nonzeros() const {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

void SparseMatrix::set_row(std::size_t r, std::vector<Entry> entries) {
  if (r >= rows_.size()) throw std::invalid_argument("row index out of range");
  std::erase_if(entries, [](const Entry& e) { return e.value == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.col < b.col; });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].col >= num_cols_) {
      throw std::invalid_argument("column index out of range in row " +
                                  std::to_string(r));
    }
    if (k > 0 && entries[k].col == entries[k - 1].col) {
      throw std::invalid_argument("duplicate column " +
                                  std::to_string(entries[k].col) + " in row " +
                                  std::to_string(r));
    }
    if (!std::isfinite(entries[k].value)) {
      throw std::invalid_argument("non-finite coefficient in row " +
                                  std::to_string(r));
    }
  }
  rows_[r] = std::move(entries);
}

void SparseMatrix::scale_row(std::size_t r, double factor) {
  if (factor == 0.0) throw std::invalid_argument("zero row scale");
  for (auto& e : rows_[r]) e.value *= factor;
}

double SparseMatrix::coefficient(std::size_t r, std::size_t c) const {
  const auto& row = rows_[r];
  auto it = std::lower_bound(
      row.begin(), row.end(), c,
      [](const Entry& e, std::size_t col) { return e.col < col; });
  return (it != row.end() && it->col == c) ? it->value : 0.0;
}

std::vector<std::vector<Entry>> SparseMatrix::columns() const {
  std::vector<std::vector<Entry>> cols(num_cols_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& e : rows_[r]) cols[e.col].push_back({r, e.value});
  }
  return cols;
}

void validate(const MipInstance& inst) {
  const std::size_t n = inst.num_vars();
  const std::size_t m = inst.num_rows();
  if (inst.row_upper.size() != m || inst.rows.num_rows() != m) {
    throw std::invalid_argument("row data size mismatch");
  }
  if (inst.var_lower.size() != n || inst.var_upper.size() != n ||
      inst.integer_mask.size() != n || inst.rows.num_cols() != n) {
    throw std::invalid_argument("column data size mismatch");
  }
  if (!inst.var_names.empty() && inst.var_names.size() != n) {
    throw std::invalid_argument("variable name count mismatch");
  }
  if (!inst.row_names.empty() && inst.row_names.size() != m) {
    throw std::invalid_argument("row name count mismatch");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(inst.objective[j])) {
      throw std::invalid_argument("non-finite objective coefficient");
    }
    if (std::isnan(inst.var_lower[j]) || std::isnan(inst.var_upper[j]) ||
        inst.var_lower[j] > inst.var_upper[j] || inst.var_lower[j] == kInf ||
        inst.var_upper[j] == -kInf) {
      throw std::invalid_argument("invalid bounds on variable " +
                                  std::to_string(j));
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = inst.row_lower[k];
    const double up = inst.row_upper[k];
    if (std::isnan(lo) || std::isnan(up) || lo > up || lo == kInf ||
        up == -kInf) {
      throw std::invalid_argument("invalid bounds on row " + std::to_string(k));
    }
    if (lo == -kInf && up == kInf) {
      throw std::invalid_argument("row " + std::to_string(k) +
                                  " has no finite side");
    }
    for (const auto& e : inst.rows.row(k)) {
      if (e.value == 0.0) {
        throw std::invalid_argument("explicit zero stored in row " +
                                    std::to_string(k));
      }
    }
  }
}

MipInstance make_instance(std::string name, std::vector<double> objective,
                          std::vector<std::vector<Entry>> rows,
                          std::vector<double> row_lower,
                          std::vector<double> row_upper,
                          std::vector<double> var_lower,
                          std::vector<double> var_upper,
                          std::vector<bool> integer_mask) {
  MipInstance inst;
  inst.name = std::move(name);
  const std::size_t n = objective.size();
  inst.objective = std::move(objective);
  inst.rows = SparseMatrix(rows.size(), n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    inst.rows.set_row(k, std::move(rows[k]));
  }
  inst.row_lower = std::move(row_lower);
  inst.row_upper = std::move(row_upper);
  inst.var_lower = std::move(var_lower);
  inst.var_upper = std::move(var_upper);
  inst.integer_mask = std::move(integer_mask);
  for (std::size_t j = 0; j < n; ++j) {
    inst.var_names.push_back("x" + std::to_string(j));
  }
  for (std::size_t k = 0; k < inst.row_lower.size(); ++k) {
    inst.row_names.push_back("c" + std::to_string(k));
  }
  validate(inst);
  return inst;
}

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.num_rows() != b.num_rows() || a.num_cols() != b.num_cols()) {
    return false;
  }
  for (std::size_t r = 0; r < a.num_rows(); ++r) {
    auto ra = a.row(r);
    auto rb = b.row(r);
    if (!std::equal(ra.begin(), ra.end(), rb.begin(), rb.end(),
                    [](const Entry& x, const Entry& y) {
                      return x.col == y.col;
                    })) {
      return false;
    }
  }
  return true;
}

double row_activity(std::span<const Entry> row, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& e : row) sum += e.value * x[e.col];
  return sum;
}

}  // namespace ibra
