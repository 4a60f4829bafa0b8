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

#include "ibra/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ibra {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

enum class VarState { kBasic, kAtLower, kAtUpper, kFree };

// Columns are the structurals x_0..x_{n-1}, one slack per row with column
// -e_k (so that A x - s = 0 and s carries the row bounds), and phase-one
// artificials with column sign * e_k.
class Simplex {
 public:
  Simplex(const MipInstance& inst, std::span<const double> lower,
          std::span<const double> upper, const LpOptions& options)
      : inst_(inst), opt_(options), n_(inst.num_vars()), m_(inst.num_rows()) {
    build_columns();
    const std::size_t total = n_ + m_;
    lo_.assign(total, 0.0);
    up_.assign(total, 0.0);
    x_.assign(total, 0.0);
    state_.assign(total, VarState::kAtLower);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lower[j];
      up_[j] = upper[j];
    }
    for (std::size_t k = 0; k < m_; ++k) {
      lo_[n_ + k] = inst.row_lower[k];
      up_[n_ + k] = inst.row_upper[k];
    }
    max_iter_ = opt_.max_iterations != 0 ? opt_.max_iterations
                                         : 10000 + 200 * (n_ + m_);
  }

  LpSolution solve() {
    LpSolution sol;
    for (std::size_t j = 0; j < n_; ++j) {
      if (lo_[j] > up_[j]) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
    }
    initial_basis();

    if (!artificial_row_.empty()) {
      std::vector<double> cost(num_columns(), 0.0);
      for (std::size_t a = 0; a < artificial_row_.size(); ++a) cost[n_ + m_ + a] = 1.0;
      if (!run_phase(cost)) throw LpNumericalError("phase one reported an unbounded ray");
      refactor();
      double infeasibility = 0.0;
      for (std::size_t a = 0; a < artificial_row_.size(); ++a) {
        infeasibility += x_[n_ + m_ + a];
      }
      if (infeasibility > opt_.feas_tol * std::max(1.0, scale_)) {
        sol.status = LpStatus::kInfeasible;
        sol.iterations = iterations_;
        return sol;
      }
      for (std::size_t a = 0; a < artificial_row_.size(); ++a) {
        const std::size_t j = n_ + m_ + a;
        up_[j] = 0.0;
        if (state_[j] != VarState::kBasic) state_[j] = VarState::kAtLower;
        x_[j] = 0.0;
      }
      refactor();
    }

    std::vector<double> cost(num_columns(), 0.0);
    std::copy(inst_.objective.begin(), inst_.objective.end(), cost.begin());
    if (!run_phase(cost)) {
      sol.status = LpStatus::kUnbounded;
      sol.iterations = iterations_;
      return sol;
    }
    refactor();
    check_primal();

    std::vector<double> y = multipliers(cost);
    sol.status = LpStatus::kOptimal;
    sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.y.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) sol.y[k] = -y[k];
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += inst_.objective[j] * sol.x[j];
    sol.basis = head_;
    sol.iterations = iterations_;
    return sol;
  }

 private:
  std::size_t num_columns() const { return n_ + m_ + artificial_row_.size(); }

  void build_columns() {
    col_start_.assign(n_ + 1, 0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (const auto& e : inst_.rows.row(k)) ++col_start_[e.col + 1];
    }
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t k = 0; k < m_; ++k) {
      for (const auto& e : inst_.rows.row(k)) {
        col_row_[fill[e.col]] = k;
        col_val_[fill[e.col]] = e.value;
        ++fill[e.col];
      }
    }
  }

  // Nonbasic structurals sit at a finite bound (or 0 when free); rows whose
  // activity breaks their bounds receive an artificial.
  void initial_basis() {
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        state_[j] = VarState::kAtLower;
      } else if (std::isfinite(up_[j])) {
        x_[j] = up_[j];
        state_[j] = VarState::kAtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = VarState::kFree;
      }
      if (std::isfinite(x_[j])) scale_ = std::max(scale_, std::abs(x_[j]));
    }
    head_.assign(m_, 0);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t s = n_ + k;
      const double activity = row_activity(inst_.rows.row(k), std::span<const double>(x_.data(), n_));
      if (std::isfinite(lo_[s])) scale_ = std::max(scale_, std::abs(lo_[s]));
      if (std::isfinite(up_[s])) scale_ = std::max(scale_, std::abs(up_[s]));
      if (activity > up_[s] + opt_.feas_tol) {
        x_[s] = up_[s];
        state_[s] = VarState::kAtUpper;
        add_artificial(k, -1.0, activity - up_[s]);
      } else if (activity < lo_[s] - opt_.feas_tol) {
        x_[s] = lo_[s];
        state_[s] = VarState::kAtLower;
        add_artificial(k, 1.0, lo_[s] - activity);
      } else {
        x_[s] = activity;
        state_[s] = VarState::kBasic;
        head_[k] = s;
      }
    }
    refactor();
  }

  void add_artificial(std::size_t row, double sign, double value) {
    const std::size_t j = num_columns();
    artificial_row_.push_back(row);
    artificial_sign_.push_back(sign);
    lo_.push_back(0.0);
    up_.push_back(kInf);
    x_.push_back(value);
    state_.push_back(VarState::kBasic);
    head_[row] = j;
  }

  // Dense column of variable j.
  void column(std::size_t j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (j < n_) {
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) out[col_row_[p]] = col_val_[p];
    } else if (j < n_ + m_) {
      out[j - n_] = -1.0;
    } else {
      const std::size_t a = j - n_ - m_;
      out[artificial_row_[a]] = artificial_sign_[a];
    }
  }

  // Binv * a_j.
  void ftran(std::size_t j, std::vector<double>& alpha) const {
    std::fill(alpha.begin(), alpha.end(), 0.0);
    auto axpy = [&](std::size_t k, double v) {
      for (std::size_t r = 0; r < m_; ++r) alpha[r] += binv_[r * m_ + k] * v;
    };
    if (j < n_) {
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) axpy(col_row_[p], col_val_[p]);
    } else if (j < n_ + m_) {
      axpy(j - n_, -1.0);
    } else {
      const std::size_t a = j - n_ - m_;
      axpy(artificial_row_[a], artificial_sign_[a]);
    }
  }

  double reduced_cost(std::size_t j, std::span<const double> cost,
                      const std::vector<double>& y) const {
    double d = cost[j];
    if (j < n_) {
      for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= y[col_row_[p]] * col_val_[p];
    } else if (j < n_ + m_) {
      d += y[j - n_];
    } else {
      const std::size_t a = j - n_ - m_;
      d -= y[artificial_row_[a]] * artificial_sign_[a];
    }
    return d;
  }

  std::vector<double> multipliers(std::span<const double> cost) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[head_[r]];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * binv_[r * m_ + i];
    }
    return y;
  }

  // Rebuilds Binv from scratch by Gauss-Jordan elimination and recomputes
  // the basic values from the nonbasic ones.
  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    std::vector<double> b(m_ * m_, 0.0);
    std::vector<double> col(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      column(head_[r], col);
      for (std::size_t i = 0; i < m_; ++i) b[i * m_ + r] = col[i];
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(b[r * m_ + c]) > std::abs(b[piv * m_ + c])) piv = r;
      }
      if (std::abs(b[piv * m_ + c]) < 1e-12) throw LpNumericalError("singular basis");
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[piv * m_ + k], b[c * m_ + k]);
          std::swap(binv_[piv * m_ + k], binv_[c * m_ + k]);
        }
      }
      const double inv = 1.0 / b[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c * m_ + k] *= inv;
        binv_[c * m_ + k] *= inv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = b[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[r * m_ + k] -= f * b[c * m_ + k];
          binv_[r * m_ + k] -= f * binv_[c * m_ + k];
        }
      }
    }
    // B x_B = -N x_N
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < num_columns(); ++j) {
      if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
      column(j, col);
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= col[i] * x_[j];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[r * m_ + i] * rhs[i];
      x_[head_[r]] = v;
    }
  }

  void pivot(std::size_t leave_row, const std::vector<double>& alpha) {
    const double inv = 1.0 / alpha[leave_row];
    double* prow = &binv_[leave_row * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == leave_row || alpha[r] == 0.0) continue;
      const double f = alpha[r];
      double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
  }

  // Returns false when the objective is unbounded below.
  bool run_phase(std::span<const double> cost) {
    std::vector<double> alpha(m_);
    std::size_t degenerate = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= max_iter_) {
        throw LpNumericalError("simplex iteration limit exceeded");
      }
      if (since_refactor_ >= opt_.refactor_interval) refactor();
      const std::vector<double> y = multipliers(cost);

      std::optional<std::size_t> entering;
      double entering_d = 0.0;
      double best = 0.0;
      for (std::size_t j = 0; j < num_columns(); ++j) {
        const VarState st = state_[j];
        if (st == VarState::kBasic || lo_[j] == up_[j]) continue;
        const double d = reduced_cost(j, cost, y);
        const bool eligible = (st == VarState::kAtLower && d < -opt_.optimality_tol) ||
                              (st == VarState::kAtUpper && d > opt_.optimality_tol) ||
                              (st == VarState::kFree && std::abs(d) > opt_.optimality_tol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          entering_d = d;
        }
      }
      if (!entering) return true;

      const std::size_t q = *entering;
      const double dir = entering_d < 0.0 ? 1.0 : -1.0;
      ftran(q, alpha);

      double step = (std::isfinite(lo_[q]) && std::isfinite(up_[q])) ? up_[q] - lo_[q] : kInf;
      std::optional<std::size_t> leave;
      bool leave_at_upper = false;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = alpha[r];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double change = -dir * a;
        const std::size_t b = head_[r];
        double ratio;
        bool at_upper;
        if (change < 0.0) {
          if (!std::isfinite(lo_[b])) continue;
          ratio = (x_[b] - lo_[b]) / -change;
          at_upper = false;
        } else {
          if (!std::isfinite(up_[b])) continue;
          ratio = (up_[b] - x_[b]) / change;
          at_upper = true;
        }
        ratio = std::max(ratio, 0.0);
        bool take = false;
        if (ratio < step - 1e-12) {
          take = true;
        } else if (leave && ratio <= step + 1e-12) {
          take = bland ? b < head_[*leave] : std::abs(a) > std::abs(alpha[*leave]);
        }
        if (take) {
          step = ratio;
          leave = r;
          leave_at_upper = at_upper;
        }
      }
      if (!std::isfinite(step)) return false;

      x_[q] += dir * step;
      for (std::size_t r = 0; r < m_; ++r) x_[head_[r]] -= dir * alpha[r] * step;
      if (!leave) {
        state_[q] = dir > 0.0 ? VarState::kAtUpper : VarState::kAtLower;
        x_[q] = dir > 0.0 ? up_[q] : lo_[q];
      } else {
        const std::size_t b = head_[*leave];
        state_[b] = leave_at_upper ? VarState::kAtUpper : VarState::kAtLower;
        x_[b] = leave_at_upper ? up_[b] : lo_[b];
        pivot(*leave, alpha);
        head_[*leave] = q;
        state_[q] = VarState::kBasic;
      }

      if (step <= 1e-12) {
        if (++degenerate > opt_.stall_threshold) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      ++iterations_;
      ++since_refactor_;
    }
  }

  void check_primal() const {
    const double tol = 1e-5 * std::max(1.0, scale_);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t b = head_[r];
      if (x_[b] < lo_[b] - tol || x_[b] > up_[b] + tol || !std::isfinite(x_[b])) {
        throw LpNumericalError("basic solution lost primal feasibility");
      }
    }
  }

  const MipInstance& inst_;
  LpOptions opt_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  std::vector<double> binv_;
  std::vector<std::size_t> artificial_row_;
  std::vector<double> artificial_sign_;
  double scale_ = 1.0;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t max_iter_ = 0;
};

}  // namespace

LpSolution solve_lp(const MipInstance& inst, std::span<const double> lower,
                    std::span<const double> upper, const LpOptions& options) {
  if (lower.size() != inst.num_vars() || upper.size() != inst.num_vars()) {
    throw std::invalid_argument("bound vectors do not match the variable count");
  }
  return Simplex(inst, lower, upper, options).solve();
}

std::vector<double> reduced_costs(const MipInstance& inst, std::span<const double> y) {
  std::vector<double> d = inst.objective;
  for (std::size_t k = 0; k < inst.num_rows(); ++k) {
    for (const auto& e : inst.rows.row(k)) d[e.col] += y[k] * e.value;
  }
  return d;
}

}  // namespace ibra
