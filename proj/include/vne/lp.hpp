#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vne/common.hpp"
#include "vne/mip.hpp"

namespace vne::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

std::string to_string(LpStatus status);

struct LpRow {
  std::vector<std::pair<int, double>> terms;
  mip::Relation relation = mip::Relation::LessEqual;
  double rhs = 0.0;
};

struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(cost.size()); }
  static LpProblem from_model(const mip::MipModel& model);
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  double value = 0.0;
  std::vector<double> x;
  long iterations = 0;
  std::vector<int> violated_rows;  // at the infeasibility certificate point
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  double pivot_tol = 1e-9;
  long iteration_limit = 2'000'000;
  int bland_threshold = 100;  // consecutive degenerate pivots before Bland
};

// Evaluates a point against the problem data directly; returns the largest
// violation over rows and bounds. Deliberately independent of the simplex.
double max_point_violation(const LpProblem& problem, const std::vector<double>& x);

// Bounded-variable tableau simplex. One instance can be re-optimized after
// bound changes (dual simplex), which is how the branch-and-bound reuses
// work along a dive.
class Simplex {
 public:
  Simplex(const LpProblem& problem, LpOptions options = {});

  // Phase 1 + phase 2 from the all-slack basis.
  LpStatus solve_from_scratch();
  // Re-optimize after set_bound calls, starting from the current basis.
  LpStatus reoptimize();

  void set_bound(int var, double lower, double upper);
  double bound_lower(int var) const { return lo_[var]; }
  double bound_upper(int var) const { return hi_[var]; }

  double objective() const;
  // Structural variable values (first n entries of the full point).
  std::vector<double> values() const;
  long iterations() const { return iterations_; }
  // Rows violated at the current point beyond the feasibility tolerance.
  std::vector<int> violated_rows() const;
  // Largest row/bound violation of the current point under current bounds,
  // evaluated from the original data.
  double max_current_violation() const;
  // Re-derive the tableau from the original columns of the current basis.
  bool rebuild_from_basis();

 private:
  enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

  double& tab(int row, int col) { return tab_[static_cast<std::size_t>(row) * cols_ + col]; }
  double tab(int row, int col) const { return tab_[static_cast<std::size_t>(row) * cols_ + col]; }

  double nonbasic_value(int j) const;
  void snap_nonbasic();
  void recompute_basic_values();
  void recompute_reduced_costs();
  void reset_slack_basis();
  void pivot(int row, int col);

  LpStatus primal_loop(bool phase1);
  LpStatus dual_loop();
  double phase1_infeasibility() const;
  bool dual_feasible() const;

  int rows_ = 0, n_ = 0, cols_ = 0;
  LpOptions opt_;
  std::vector<LpRow> orig_rows_;
  std::vector<std::vector<std::pair<int, double>>> orig_cols_;  // structural
  std::vector<double> rhs_;
  std::vector<double> cost_, lo_, hi_;
  std::vector<double> tab_;     // rows_ x cols_ dense, B^{-1}[A I]
  std::vector<double> xb_;      // basic values per row
  std::vector<double> zred_;    // reduced costs per column
  std::vector<int> basis_;      // row -> column
  std::vector<VarState> state_;
  long iterations_ = 0;
  int degenerate_streak_ = 0;
  bool bland_ = false;
};

// Solves the LP relaxation of a model (integrality dropped).
LpSolution solve_lp(const mip::MipModel& model, const LpOptions& options = {});
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace vne::lp
