// Copyright 2026 The gridctl Authors
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

#include "gridctl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <map>
#include <ostream>
#include <queue>
#include <string>
#include <utility>

#include "gridctl/error.hpp"

namespace gridctl {

int LinearProgram::AddVariable(std::string name, double lower, double upper, double cost) {
  variables_.push_back(LpVariable{std::move(name), lower, upper, cost});
  return static_cast<int>(variables_.size()) - 1;
}

int LinearProgram::AddConstraint(std::string name, std::vector<Term> terms, RowSense sense,
                                 double rhs) {
  constraints_.push_back(LpConstraint{std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(constraints_.size()) - 1;
}

void LinearProgram::SetBounds(int var, double lower, double upper) {
  LpVariable& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

double LinearProgram::Objective(const std::vector<double>& x) const {
  double value = objective_offset_;
  for (std::size_t j = 0; j < variables_.size(); ++j) value += variables_[j].cost * x[j];
  return value;
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  auto note = [&](double excess, double bound) {
    if (excess > 0.0) worst = std::max(worst, excess / (1.0 + std::abs(bound)));
  };
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const LpVariable& v = variables_[j];
    if (std::isfinite(v.lower)) note(v.lower - x[j], v.lower);
    if (std::isfinite(v.upper)) note(x[j] - v.upper, v.upper);
  }
  for (const LpConstraint& c : constraints_) {
    double activity = 0.0;
    for (const Term& t : c.terms) activity += t.coef * x[t.var];
    if (c.sense != RowSense::kGreaterEqual) note(activity - c.rhs, c.rhs);
    if (c.sense != RowSense::kLessEqual) note(c.rhs - activity, c.rhs);
  }
  return worst;
}

void LinearProgram::Validate() const {
  for (const LpVariable& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.cost)) {
      throw Error(ErrorCode::kInvalidArgument, "variable '" + v.name + "' has NaN data");
    }
    if (v.lower > v.upper) {
      throw Error(ErrorCode::kInvalidArgument, "variable '" + v.name + "' has crossed bounds");
    }
    if (v.lower == kInfinity || v.upper == -kInfinity) {
      throw Error(ErrorCode::kInvalidArgument, "variable '" + v.name + "' has an empty domain");
    }
  }
  for (const LpConstraint& c : constraints_) {
    if (!std::isfinite(c.rhs)) {
      throw Error(ErrorCode::kInvalidArgument, "constraint '" + c.name + "' has a non-finite rhs");
    }
    for (const Term& t : c.terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "constraint '" + c.name + "' references an unknown variable");
      }
      if (!std::isfinite(t.coef)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "constraint '" + c.name + "' has a non-finite coefficient");
      }
    }
  }
  if (!std::isfinite(objective_offset_)) {
    throw Error(ErrorCode::kInvalidArgument, "objective offset is not finite");
  }
}

void MixedIntegerProgram::Validate() const {
  base.Validate();
  for (int b : binaries) {
    if (b < 0 || b >= base.num_variables()) {
      throw Error(ErrorCode::kInvalidArgument, "binary index out of range");
    }
  }
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

const char* MipStatusName(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kNodeLimit: return "node_limit";
  }
  return "unknown";
}

namespace {

enum class VarState : char { kBasic, kLower, kUpper, kFree };

// Variables 0..n-1 are the structural columns, n..n+m-1 the row activities
// r_i with column -e_i, so every row reads a_i x - r_i = 0.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp), opt_(options), n_(lp.num_variables()), m_(lp.num_constraints()) {
    const int total = n_ + m_;
    lo_.resize(total);
    hi_.resize(total);
    cost_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.variable(j).lower;
      hi_[j] = lp.variable(j).upper;
      cost_[j] = lp.variable(j).cost;
    }
    // Column-major copy of A with duplicate entries merged.
    std::vector<std::map<int, double>> cols(n_);
    for (int i = 0; i < m_; ++i) {
      const LpConstraint& c = lp.constraint(i);
      for (const Term& t : c.terms) cols[t.var][i] += t.coef;
      lo_[n_ + i] = c.sense == RowSense::kLessEqual ? -kInfinity : c.rhs;
      hi_[n_ + i] = c.sense == RowSense::kGreaterEqual ? kInfinity : c.rhs;
    }
    col_start_.push_back(0);
    for (int j = 0; j < n_; ++j) {
      for (const auto& [row, value] : cols[j]) {
        if (value == 0.0) continue;
        col_row_.push_back(row);
        col_val_.push_back(value);
      }
      col_start_.push_back(static_cast<int>(col_row_.size()));
    }
  }

  LpSolution Run() {
    const int total = n_ + m_;
    state_.resize(total);
    x_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        state_[j] = VarState::kLower;
        x_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = VarState::kUpper;
        x_[j] = hi_[j];
      } else {
        state_[j] = VarState::kFree;
      }
    }
    head_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
    }
    Refactor();

    std::vector<double> cb(m_);
    std::vector<double> y(m_);
    std::vector<double> alpha(m_);
    int since_refactor = 0;
    int degenerate_streak = 0;
    bool bland = false;
    bool relaxed = false;
    std::int64_t iterations = 0;

    for (;;) {
      if (iterations >= opt_.iteration_limit) {
        throw Error(ErrorCode::kNumericalBreakdown, "simplex iteration limit reached");
      }
      if (since_refactor >= opt_.refactor_interval) {
        Refactor();
        since_refactor = 0;
      }

      const double ptol = relaxed ? opt_.feasibility_tol : 1e-2 * opt_.feasibility_tol;
      bool phase1 = false;
      for (int i = 0; i < m_; ++i) {
        const int v = head_[i];
        cb[i] = 0.0;
        if (x_[v] < lo_[v] - ptol * (1.0 + std::abs(lo_[v]))) {
          cb[i] = -1.0;
          phase1 = true;
        } else if (x_[v] > hi_[v] + ptol * (1.0 + std::abs(hi_[v]))) {
          cb[i] = 1.0;
          phase1 = true;
        }
      }
      if (!phase1) {
        for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
      }
      std::fill(y.begin(), y.end(), 0.0);
      for (int i = 0; i < m_; ++i) {
        if (cb[i] == 0.0) continue;
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) y[k] += cb[i] * row[k];
      }

      // Pricing.
      int entering = -1;
      int direction = 0;
      double best_score = 0.0;
      for (int j = 0; j < total; ++j) {
        const VarState s = state_[j];
        if (s == VarState::kBasic || lo_[j] == hi_[j]) continue;
        const double d = (phase1 ? 0.0 : cost_[j]) - Dot(y, j);
        int dir = 0;
        if (s == VarState::kLower && d < -opt_.optimality_tol) dir = 1;
        else if (s == VarState::kUpper && d > opt_.optimality_tol) dir = -1;
        else if (s == VarState::kFree && std::abs(d) > opt_.optimality_tol) dir = d < 0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          direction = dir;
        }
      }

      if (entering < 0) {
        if (since_refactor > 0) {
          // Confirm the verdict on a fresh factorisation.
          Refactor();
          since_refactor = 0;
          continue;
        }
        if (phase1) {
          if (!relaxed && MaxBasicViolation() <= opt_.feasibility_tol) {
            relaxed = true;
            continue;
          }
          LpSolution out;
          out.status = LpStatus::kInfeasible;
          out.duals = y;
          out.iterations = iterations;
          out.values.assign(x_.begin(), x_.begin() + n_);
          return out;
        }
        return Finish(y, iterations);
      }

      // Column of the entering variable in the current basis.
      std::fill(alpha.begin(), alpha.end(), 0.0);
      if (entering < n_) {
        for (int p = col_start_[entering]; p < col_start_[entering + 1]; ++p) {
          const int k = col_row_[p];
          const double a = col_val_[p];
          for (int i = 0; i < m_; ++i) alpha[i] += binv_[static_cast<std::size_t>(i) * m_ + k] * a;
        }
      } else {
        const int k = entering - n_;
        for (int i = 0; i < m_; ++i) alpha[i] = -binv_[static_cast<std::size_t>(i) * m_ + k];
      }

      // Two-pass (Harris) ratio test. Pass 1 finds the step allowed when
      // every bound is relaxed by the tolerance, pass 2 picks among the rows
      // blocking within that step the one with the largest pivot.
      const double htol = 1e-2 * opt_.feasibility_tol;
      double theta_max = kInfinity;
      auto limit = [&](int i, double delta, double slack_tol, int* side) -> double {
        const int v = head_[i];
        const double lo = lo_[v];
        const double hi = hi_[v];
        const double xv = x_[v];
        const double tl = slack_tol * (1.0 + std::abs(lo));
        const double th = slack_tol * (1.0 + std::abs(hi));
        const bool below = xv < lo - ptol * (1.0 + std::abs(lo));
        const bool above = xv > hi + ptol * (1.0 + std::abs(hi));
        if (phase1 && below) {
          if (delta > 0.0) {
            *side = -1;
            return std::max(0.0, (lo - xv + tl) / delta);
          }
          return kInfinity;
        }
        if (phase1 && above) {
          if (delta < 0.0) {
            *side = 1;
            return std::max(0.0, (xv - hi + th) / -delta);
          }
          return kInfinity;
        }
        if (delta < 0.0 && std::isfinite(lo)) {
          *side = -1;
          return std::max(0.0, (xv - lo + tl) / -delta);
        }
        if (delta > 0.0 && std::isfinite(hi)) {
          *side = 1;
          return std::max(0.0, (hi - xv + th) / delta);
        }
        return kInfinity;
      };
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
        int side = 0;
        theta_max = std::min(theta_max, limit(i, -direction * alpha[i], htol, &side));
      }
      int leave_row = -1;
      int leave_side = 0;
      double theta = kInfinity;
      if (std::isfinite(theta_max)) {
        double best_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
          int side = 0;
          const double t = limit(i, -direction * alpha[i], 0.0, &side);
          if (t > theta_max) continue;
          const bool better =
              leave_row < 0 ||
              (bland ? head_[i] < head_[leave_row] : std::abs(alpha[i]) > best_pivot);
          if (better) {
            leave_row = i;
            leave_side = side;
            best_pivot = std::abs(alpha[i]);
            theta = t;
          }
        }
      }

      const double flip = hi_[entering] - lo_[entering];
      const bool bound_flip = std::isfinite(flip) && flip <= theta;
      if (bound_flip) theta = flip;

      if (!std::isfinite(theta)) {
        if (phase1) {
          throw Error(ErrorCode::kNumericalBreakdown, "phase 1 step is unbounded");
        }
        LpSolution out;
        out.status = LpStatus::kUnbounded;
        out.iterations = iterations;
        out.values.assign(x_.begin(), x_.begin() + n_);
        out.ray.assign(n_, 0.0);
        if (entering < n_) out.ray[entering] = direction;
        for (int i = 0; i < m_; ++i) {
          if (head_[i] < n_) out.ray[head_[i]] = -direction * alpha[i];
        }
        return out;
      }

      ++iterations;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= theta * direction * alpha[i];
      x_[entering] += theta * direction;

      if (theta <= 1e-12) {
        if (++degenerate_streak >= opt_.degenerate_streak_for_bland) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }

      if (bound_flip) {
        state_[entering] = direction > 0 ? VarState::kUpper : VarState::kLower;
        x_[entering] = direction > 0 ? hi_[entering] : lo_[entering];
        continue;
      }

      const int leaving = head_[leave_row];
      state_[leaving] = leave_side < 0 ? VarState::kLower : VarState::kUpper;
      x_[leaving] = leave_side < 0 ? lo_[leaving] : hi_[leaving];
      state_[entering] = VarState::kBasic;
      head_[leave_row] = entering;

      const double pivot = alpha[leave_row];
      double* prow = &binv_[static_cast<std::size_t>(leave_row) * m_];
      for (int k = 0; k < m_; ++k) prow[k] /= pivot;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row || alpha[i] == 0.0) continue;
        const double f = alpha[i];
        double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
      }
      ++since_refactor;
    }
  }

 private:
  double Dot(const std::vector<double>& y, int j) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) s += y[col_row_[p]] * col_val_[p];
    return s;
  }

  double NonbasicValue(int j) const {
    switch (state_[j]) {
      case VarState::kLower: return lo_[j];
      case VarState::kUpper: return hi_[j];
      default: return 0.0;
    }
  }

  double MaxBasicViolation() const {
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[i];
      if (x_[v] < lo_[v]) worst = std::max(worst, (lo_[v] - x_[v]) / (1.0 + std::abs(lo_[v])));
      if (x_[v] > hi_[v]) worst = std::max(worst, (x_[v] - hi_[v]) / (1.0 + std::abs(hi_[v])));
    }
    return worst;
  }

  // Gauss-Jordan inversion of the basis matrix, then basic values from the
  // nonbasic ones.
  void Refactor() {
    const std::size_t mm = static_cast<std::size_t>(m_);
    std::vector<double> b(mm * mm, 0.0);
    for (int c = 0; c < m_; ++c) {
      const int j = head_[c];
      if (j >= n_) {
        b[static_cast<std::size_t>(j - n_) * mm + c] = -1.0;
      } else {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          b[static_cast<std::size_t>(col_row_[p]) * mm + c] = col_val_[p];
        }
      }
    }
    binv_.assign(mm * mm, 0.0);
    for (std::size_t i = 0; i < mm; ++i) binv_[i * mm + i] = 1.0;
    for (std::size_t c = 0; c < mm; ++c) {
      std::size_t piv = c;
      double best = std::abs(b[c * mm + c]);
      for (std::size_t r = c + 1; r < mm; ++r) {
        if (std::abs(b[r * mm + c]) > best) {
          best = std::abs(b[r * mm + c]);
          piv = r;
        }
      }
      if (best < 1e-12) {
        throw Error(ErrorCode::kNumericalBreakdown, "singular simplex basis");
      }
      if (piv != c) {
        std::swap_ranges(b.begin() + piv * mm, b.begin() + piv * mm + mm, b.begin() + c * mm);
        std::swap_ranges(binv_.begin() + piv * mm, binv_.begin() + piv * mm + mm,
                         binv_.begin() + c * mm);
      }
      const double inv = 1.0 / b[c * mm + c];
      for (std::size_t k = 0; k < mm; ++k) {
        b[c * mm + k] *= inv;
        binv_[c * mm + k] *= inv;
      }
      for (std::size_t r = 0; r < mm; ++r) {
        if (r == c) continue;
        const double f = b[r * mm + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < mm; ++k) {
          b[r * mm + k] -= f * b[c * mm + k];
          binv_[r * mm + k] -= f * binv_[c * mm + k];
        }
      }
    }
    // B x_B = -N x_N.
    std::vector<double> rhs(mm, 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      x_[j] = NonbasicValue(j);
      if (x_[j] == 0.0) continue;
      if (j >= n_) {
        rhs[j - n_] += x_[j];
      } else {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          rhs[col_row_[p]] -= col_val_[p] * x_[j];
        }
      }
    }
    for (std::size_t i = 0; i < mm; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < mm; ++k) s += binv_[i * mm + k] * rhs[k];
      x_[head_[i]] = s;
    }
  }

  LpSolution Finish(const std::vector<double>& y, std::int64_t iterations) {
    LpSolution out;
    out.status = LpStatus::kOptimal;
    out.iterations = iterations;
    out.values.assign(x_.begin(), x_.begin() + n_);
    // Snap nonbasic values exactly onto their bounds.
    for (int j = 0; j < n_; ++j) {
      if (state_[j] != VarState::kBasic) out.values[j] = NonbasicValue(j);
    }
    out.objective = lp_.Objective(out.values);
    out.duals = y;
    out.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) out.reduced_costs[j] = cost_[j] - Dot(y, j);
    return out;
  }

  const LinearProgram& lp_;
  const LpOptions& opt_;
  const int n_;
  const int m_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<int> head_;
  std::vector<double> binv_;  // row-major m x m
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options) {
  lp.Validate();
  Simplex simplex(lp, options);
  return simplex.Run();
}

double DualObjective(const LinearProgram& lp, const LpSolution& solution, double tol) {
  if (solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInvalidArgument, "dual objective needs an optimal solution");
  }
  double value = lp.objective_offset();
  auto add = [&](double d, double lo, double hi) {
    if (d > tol) {
      value += std::isfinite(lo) ? d * lo : -kInfinity;
    } else if (d < -tol) {
      value += std::isfinite(hi) ? d * hi : -kInfinity;
    } else if (d != 0.0) {
      // Within tolerance: charge the nearest finite bound (or nothing).
      const double at = d > 0 ? lo : hi;
      if (std::isfinite(at)) value += d * at;
    }
  };
  for (int j = 0; j < lp.num_variables(); ++j) {
    add(solution.reduced_costs[j], lp.variable(j).lower, lp.variable(j).upper);
  }
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const LpConstraint& c = lp.constraint(i);
    const double lo = c.sense == RowSense::kLessEqual ? -kInfinity : c.rhs;
    const double hi = c.sense == RowSense::kGreaterEqual ? kInfinity : c.rhs;
    add(solution.duals[i], lo, hi);
  }
  return value;
}

namespace {

struct MipNode {
  double bound = -kInfinity;
  std::int64_t id = 0;
  std::vector<std::pair<int, char>> fixes;
};

struct WorseNode {
  bool operator()(const MipNode& a, const MipNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

bool IntegralObjective(const MixedIntegerProgram& mip) {
  std::vector<char> is_binary(mip.base.num_variables(), 0);
  for (int b : mip.binaries) is_binary[b] = 1;
  if (mip.base.objective_offset() != std::round(mip.base.objective_offset())) return false;
  for (int j = 0; j < mip.base.num_variables(); ++j) {
    const double c = mip.base.variable(j).cost;
    if (c == 0.0) continue;
    if (!is_binary[j] || c != std::round(c)) return false;
  }
  return true;
}

}  // namespace

MipResult SolveMip(const MixedIntegerProgram& mip, const MipOptions& options) {
  mip.Validate();
  MipResult result;
  LinearProgram work = mip.base;
  std::vector<std::pair<double, double>> base_bounds;
  for (int b : mip.binaries) {
    const LpVariable& v = mip.base.variable(b);
    base_bounds.emplace_back(std::max(v.lower, 0.0), std::min(v.upper, 1.0));
  }
  const bool integral = IntegralObjective(mip);

  double incumbent_value = kInfinity;
  auto accept = [&](std::vector<double> values) {
    for (int b : mip.binaries) values[b] = std::round(values[b]);
    LpSolution s;
    s.status = LpStatus::kOptimal;
    s.objective = mip.base.Objective(values);
    s.values = std::move(values);
    incumbent_value = s.objective;
    result.incumbent_history.push_back(s.objective);
    result.solution = std::move(s);
  };

  if (options.incumbent) {
    const std::vector<double>& x = *options.incumbent;
    if (static_cast<int>(x.size()) != mip.base.num_variables()) {
      throw Error(ErrorCode::kInvalidArgument, "incumbent has the wrong length");
    }
    for (int b : mip.binaries) {
      if (std::abs(x[b] - std::round(x[b])) > options.integrality_tol) {
        throw Error(ErrorCode::kInvalidArgument, "incumbent is not integral");
      }
    }
    if (mip.base.MaxViolation(x) > options.lp.feasibility_tol) {
      throw Error(ErrorCode::kInvalidArgument, "incumbent is infeasible");
    }
    accept(x);
  }

  auto pruned = [&](double bound) {
    if (!std::isfinite(incumbent_value)) return false;
    if (integral) return std::ceil(bound - 1e-6) >= incumbent_value - 0.5;
    return bound >= incumbent_value - options.relative_gap * std::max(1.0, std::abs(incumbent_value));
  };

  std::priority_queue<MipNode, std::vector<MipNode>, WorseNode> open;
  std::int64_t next_id = 0;
  open.push(MipNode{-kInfinity, next_id++, {}});
  bool hit_limit = false;

  while (!open.empty()) {
    MipNode node = open.top();
    if (pruned(node.bound)) {
      open.pop();
      continue;
    }
    if (result.nodes >= options.node_limit) {
      hit_limit = true;
      break;
    }
    open.pop();
    for (std::size_t k = 0; k < mip.binaries.size(); ++k) {
      work.SetBounds(mip.binaries[k], base_bounds[k].first, base_bounds[k].second);
    }
    for (const auto& [var, value] : node.fixes) work.SetBounds(var, value, value);
    const LpSolution relax = SolveLp(work, options.lp);
    ++result.nodes;
    if (relax.status == LpStatus::kInfeasible) continue;
    if (relax.status == LpStatus::kUnbounded) {
      result.status = MipStatus::kUnbounded;
      return result;
    }
    if (pruned(relax.objective)) continue;

    int branch_var = -1;
    double best_frac = -1.0;
    for (int b : mip.binaries) {
      const double v = relax.values[b];
      const double frac = std::abs(v - std::round(v));
      if (frac <= options.integrality_tol) continue;
      const double score = 0.5 - std::abs(v - std::floor(v) - 0.5);
      if (score > best_frac + 1e-12 || (std::abs(score - best_frac) <= 1e-12 && b < branch_var)) {
        best_frac = score;
        branch_var = b;
      }
    }
    if (branch_var < 0) {
      if (relax.objective < incumbent_value) accept(relax.values);
      continue;
    }
    ++result.branches;
    for (char value : {char{0}, char{1}}) {
      MipNode child{relax.objective, next_id++, node.fixes};
      child.fixes.emplace_back(branch_var, value);
      open.push(std::move(child));
    }
  }

  if (hit_limit) {
    result.status = MipStatus::kNodeLimit;
    double bound = incumbent_value;
    while (!open.empty()) {
      bound = std::min(bound, open.top().bound);
      open.pop();
    }
    result.best_bound = bound;
    return result;
  }
  if (result.solution) {
    result.status = MipStatus::kOptimal;
    result.proven_optimal = true;
    result.best_bound = incumbent_value;
  } else {
    result.status = MipStatus::kInfeasible;
    result.best_bound = kInfinity;
  }
  return result;
}

namespace {

std::string LpName(const std::string& name, char prefix, int index) {
  bool ok = !name.empty() && name.size() <= 200 && !std::isdigit(static_cast<unsigned char>(name[0])) &&
            name[0] != 'e' && name[0] != 'E' && name[0] != '.';
  for (char ch : name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '[' ||
          ch == ']' || ch == '(' || ch == ')')) {
      ok = false;
    }
  }
  if (ok) return name;
  return std::string(1, prefix) + std::to_string(index);
}

std::string Num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void WriteLinear(std::ostream& out, const std::vector<std::pair<double, std::string>>& terms) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  for (const auto& [coef, name] : terms) {
    out << (coef < 0 ? " - " : " + ") << Num(std::abs(coef)) << ' ' << name;
  }
}

}  // namespace

void WriteLpFormat(const LinearProgram& lp, std::ostream& out, const std::vector<int>& binaries) {
  std::vector<std::string> names;
  for (int j = 0; j < lp.num_variables(); ++j) names.push_back(LpName(lp.variable(j).name, 'x', j));
  out << "\\ objective offset " << Num(lp.objective_offset()) << "\n";
  out << "Minimize\n obj:";
  std::vector<std::pair<double, std::string>> obj;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.variable(j).cost != 0.0) obj.emplace_back(lp.variable(j).cost, names[j]);
  }
  WriteLinear(out, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const LpConstraint& c = lp.constraint(i);
    std::vector<std::pair<double, std::string>> row;
    for (const Term& t : c.terms) row.emplace_back(t.coef, names[t.var]);
    out << ' ' << LpName(c.name, 'c', i) << ':';
    WriteLinear(out, row);
    const char* op = c.sense == RowSense::kLessEqual ? " <= " : c.sense == RowSense::kEqual ? " = " : " >= ";
    out << op << Num(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const LpVariable& v = lp.variable(j);
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << ' ' << names[j] << " free\n";
    } else {
      out << ' ' << (std::isfinite(v.lower) ? Num(v.lower) : "-inf") << " <= " << names[j]
          << " <= " << (std::isfinite(v.upper) ? Num(v.upper) : "+inf") << "\n";
    }
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (int b : binaries) out << ' ' << names[b] << "\n";
  }
  out << "End\n";
}

}  // namespace gridctl
