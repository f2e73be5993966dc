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

// Linear and mixed-binary programming.
//
// SolveLp is a revised primal simplex method over bounded variables: every
// structural variable and every row activity carries its own [lower, upper]
// interval, so two-sided flow bounds never need extra rows or split columns.
// A composite phase 1 (minimising the sum of bound violations of the basic
// variables) hands over to phase 2 as soon as the basis is primal feasible.
// Pricing is Dantzig's rule; after a streak of degenerate pivots the solver
// switches to Bland's rule until the objective moves again, which rules out
// cycling and keeps pivot sequences deterministic.
//
// SolveMip is a best-first branch and bound over binary variables using
// SolveLp on each node relaxation.

#ifndef GRIDCTL_LP_HPP_
#define GRIDCTL_LP_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gridctl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

struct LpConstraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;
};

// Minimisation problem: min c'x + offset s.t. rows, lower <= x <= upper.
class LinearProgram {
 public:
  int AddVariable(std::string name, double lower, double upper, double cost = 0.0);
  int AddConstraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  void SetCost(int var, double cost) { variables_.at(var).cost = cost; }
  void SetBounds(int var, double lower, double upper);
  void set_objective_offset(double offset) { objective_offset_ = offset; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const LpVariable& variable(int j) const { return variables_[j]; }
  const LpConstraint& constraint(int i) const { return constraints_[i]; }
  const std::vector<LpVariable>& variables() const { return variables_; }
  const std::vector<LpConstraint>& constraints() const { return constraints_; }
  double objective_offset() const { return objective_offset_; }

  // Objective value of an arbitrary assignment (offset included).
  double Objective(const std::vector<double>& x) const;

  // Largest violation of any row or bound by x, each measured relative to
  // 1 + |bound|.
  double MaxViolation(const std::vector<double>& x) const;

  // Throws kInvalidArgument on out-of-range indices, NaN data or crossed
  // bounds.
  void Validate() const;

 private:
  std::vector<LpVariable> variables_;
  std::vector<LpConstraint> constraints_;
  double objective_offset_ = 0.0;
};

struct MixedIntegerProgram {
  LinearProgram base;
  std::vector<int> binaries;  // variable indices restricted to {0, 1}

  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;  // one per variable
  double objective = 0.0;
  // Optimal: one dual multiplier per row (sign convention: reduced cost
  // d_j = c_j - sum_i y_i a_ij). Infeasible: phase-1 multipliers, a Farkas
  // style certificate. Empty otherwise.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  // Unbounded: a primal ray (per variable) along which the objective
  // decreases without bound.
  std::vector<double> ray;
  std::int64_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int degenerate_streak_for_bland = 50;
  int refactor_interval = 64;
  std::int64_t iteration_limit = 2'000'000;
};

// Throws kNumericalBreakdown when the basis becomes singular on
// refactorisation or the iteration limit is hit.
LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options = {});

// Lagrangian dual bound b'y + sum_j min_{x_j in [l_j,u_j]} d_j x_j for the
// multipliers of an optimal solution (minus infinity if some reduced cost
// points at an infinite bound beyond tolerance).
double DualObjective(const LinearProgram& lp, const LpSolution& solution,
                     double tol = 1e-7);

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit };

const char* MipStatusName(MipStatus status);

struct MipOptions {
  LpOptions lp;
  double integrality_tol = 1e-6;
  std::int64_t node_limit = 100'000;
  // A full assignment known to be feasible; used as starting incumbent.
  std::optional<std::vector<double>> incumbent;
  // Nodes whose bound is within this (relative) gap of the incumbent are
  // pruned.
  double relative_gap = 1e-9;
};

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  // Best integral solution (status Optimal, or NodeLimit with incumbent).
  std::optional<LpSolution> solution;
  bool proven_optimal = false;
  double best_bound = -kInfinity;
  std::int64_t nodes = 0;
  std::int64_t branches = 0;
  // Objective of every accepted incumbent, in the order found.
  std::vector<double> incumbent_history;
};

MipResult SolveMip(const MixedIntegerProgram& mip, const MipOptions& options = {});

// CPLEX-style LP text export for cross-checking with external solvers.
void WriteLpFormat(const LinearProgram& lp, std::ostream& out,
                   const std::vector<int>& binaries = {});

}  // namespace gridctl

#endif  // GRIDCTL_LP_HPP_
