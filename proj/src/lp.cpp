#include "vne/lp.hpp"

#include <algorithm>
#include <cmath>

namespace vne::lp {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

LpProblem LpProblem::from_model(const mip::MipModel& model) {
  LpProblem p;
  p.cost.assign(model.variables.size(), 0.0);
  p.lower.reserve(model.variables.size());
  p.upper.reserve(model.variables.size());
  for (const auto& v : model.variables) {
    p.lower.push_back(v.lower);
    p.upper.push_back(v.upper);
  }
  for (const auto& [idx, coeff] : model.objective) p.cost[idx] = coeff;
  p.rows.reserve(model.constraints.size());
  for (const auto& row : model.constraints) {
    p.rows.push_back({row.terms, row.relation, row.rhs});
  }
  return p;
}

double max_point_violation(const LpProblem& problem, const std::vector<double>& x) {
  double worst = 0;
  for (int j = 0; j < problem.num_vars(); ++j) {
    worst = std::max(worst, problem.lower[j] - x[j]);
    if (!is_unbounded(problem.upper[j])) worst = std::max(worst, x[j] - problem.upper[j]);
  }
  for (const auto& row : problem.rows) {
    double lhs = 0;
    for (const auto& [idx, coeff] : row.terms) lhs += coeff * x[idx];
    switch (row.relation) {
      case mip::Relation::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case mip::Relation::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case mip::Relation::Equal: worst = std::max(worst, std::fabs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

Simplex::Simplex(const LpProblem& problem, LpOptions options)
    : rows_(static_cast<int>(problem.rows.size())),
      n_(problem.num_vars()),
      cols_(n_ + rows_),
      opt_(options),
      orig_rows_(problem.rows) {
  cost_.assign(cols_, 0.0);
  lo_.assign(cols_, 0.0);
  hi_.assign(cols_, kUnbounded);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = problem.cost[j];
    lo_[j] = problem.lower[j];
    hi_[j] = problem.upper[j];
  }
  rhs_.resize(rows_);
  orig_cols_.assign(n_, {});
  for (int i = 0; i < rows_; ++i) {
    const auto& row = orig_rows_[i];
    rhs_[i] = row.rhs;
    for (const auto& [idx, coeff] : row.terms) {
      orig_cols_[idx].emplace_back(i, coeff);
    }
    // Slack column bounds encode the relation: <= gives s in [0, inf),
    // = pins s at zero, >= gives s in (-inf, 0].
    int s = n_ + i;
    switch (row.relation) {
      case mip::Relation::LessEqual: lo_[s] = 0; hi_[s] = kUnbounded; break;
      case mip::Relation::Equal: lo_[s] = 0; hi_[s] = 0; break;
      case mip::Relation::GreaterEqual: lo_[s] = -kUnbounded; hi_[s] = 0; break;
    }
  }
  reset_slack_basis();
}

void Simplex::reset_slack_basis() {
  tab_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
  basis_.resize(rows_);
  state_.assign(cols_, VarState::AtLower);
  for (int i = 0; i < rows_; ++i) {
    for (const auto& [idx, coeff] : orig_rows_[i].terms) tab(i, idx) = coeff;
    tab(i, n_ + i) = 1.0;
    basis_[i] = n_ + i;
  }
  for (int j = 0; j < cols_; ++j) {
    if (lo_[j] == -kUnbounded && is_unbounded(hi_[j])) {
      state_[j] = VarState::FreeZero;
    } else if (lo_[j] == -kUnbounded) {
      state_[j] = VarState::AtUpper;
    } else {
      state_[j] = VarState::AtLower;
    }
  }
  for (int i = 0; i < rows_; ++i) state_[n_ + i] = VarState::Basic;
  recompute_basic_values();
  recompute_reduced_costs();
}

double Simplex::nonbasic_value(int j) const {
  switch (state_[j]) {
    case VarState::AtLower: return lo_[j];
    case VarState::AtUpper: return hi_[j];
    case VarState::FreeZero: return 0.0;
    case VarState::Basic: break;
  }
  return 0.0;
}

void Simplex::snap_nonbasic() {
  for (int j = 0; j < cols_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    if (state_[j] == VarState::AtLower && lo_[j] == -kUnbounded) {
      state_[j] = is_unbounded(hi_[j]) ? VarState::FreeZero : VarState::AtUpper;
    } else if (state_[j] == VarState::AtUpper && is_unbounded(hi_[j])) {
      state_[j] = lo_[j] == -kUnbounded ? VarState::FreeZero : VarState::AtLower;
    } else if (state_[j] == VarState::FreeZero &&
               (lo_[j] != -kUnbounded || !is_unbounded(hi_[j]))) {
      state_[j] = lo_[j] != -kUnbounded ? VarState::AtLower : VarState::AtUpper;
    }
  }
}

void Simplex::recompute_basic_values() {
  // x_B = B^{-1} b - sum_j nonbasic T[:,j] x_j; the slack block of the
  // tableau is exactly B^{-1}.
  xb_.assign(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* row = &tab_[static_cast<std::size_t>(i) * cols_];
    double v = 0;
    for (int k = 0; k < rows_; ++k) {
      if (rhs_[k] != 0) v += row[n_ + k] * rhs_[k];
    }
    xb_[i] = v;
  }
  for (int j = 0; j < cols_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    double xj = nonbasic_value(j);
    if (xj == 0) continue;
    for (int i = 0; i < rows_; ++i) {
      double t = tab(i, j);
      if (t != 0) xb_[i] -= t * xj;
    }
  }
}

void Simplex::recompute_reduced_costs() {
  zred_ = cost_;
  for (int i = 0; i < rows_; ++i) {
    double cb = cost_[basis_[i]];
    if (cb == 0) continue;
    const double* row = &tab_[static_cast<std::size_t>(i) * cols_];
    for (int j = 0; j < cols_; ++j) zred_[j] -= cb * row[j];
  }
  for (int i = 0; i < rows_; ++i) zred_[basis_[i]] = 0.0;
}

void Simplex::pivot(int row, int col) {
  double* prow = &tab_[static_cast<std::size_t>(row) * cols_];
  const double piv = prow[col];
  const double inv = 1.0 / piv;
  for (int j = 0; j < cols_; ++j) prow[j] *= inv;
  prow[col] = 1.0;
  for (int i = 0; i < rows_; ++i) {
    if (i == row) continue;
    double* irow = &tab_[static_cast<std::size_t>(i) * cols_];
    const double factor = irow[col];
    if (std::fabs(factor) < 1e-13) { irow[col] = 0.0; continue; }
    for (int j = 0; j < cols_; ++j) irow[j] -= factor * prow[j];
    irow[col] = 0.0;
  }
  const double zq = zred_[col];
  if (std::fabs(zq) > 0) {
    for (int j = 0; j < cols_; ++j) zred_[j] -= zq * prow[j];
  }
  zred_[col] = 0.0;
  ++iterations_;
}

double Simplex::phase1_infeasibility() const {
  double sum = 0;
  for (int i = 0; i < rows_; ++i) {
    int b = basis_[i];
    if (xb_[i] < lo_[b] - opt_.feas_tol) sum += lo_[b] - xb_[i];
    if (!is_unbounded(hi_[b]) && xb_[i] > hi_[b] + opt_.feas_tol) sum += xb_[i] - hi_[b];
  }
  return sum;
}

bool Simplex::dual_feasible() const {
  for (int j = 0; j < cols_; ++j) {
    switch (state_[j]) {
      case VarState::Basic: break;
      case VarState::AtLower:
        if (zred_[j] < -10 * opt_.opt_tol && hi_[j] != lo_[j]) return false;
        break;
      case VarState::AtUpper:
        if (zred_[j] > 10 * opt_.opt_tol && hi_[j] != lo_[j]) return false;
        break;
      case VarState::FreeZero:
        if (std::fabs(zred_[j]) > 10 * opt_.opt_tol) return false;
        break;
    }
  }
  return true;
}

LpStatus Simplex::primal_loop(bool phase1) {
  std::vector<double> g;  // phase-1 reduced costs, rebuilt per iteration
  while (true) {
    if (iterations_ > opt_.iteration_limit) return LpStatus::IterationLimit;

    const double* price = zred_.data();
    if (phase1) {
      if (phase1_infeasibility() <= opt_.feas_tol) return LpStatus::Optimal;
      g.assign(cols_, 0.0);
      for (int i = 0; i < rows_; ++i) {
        int b = basis_[i];
        double dir = 0;
        if (xb_[i] < lo_[b] - opt_.feas_tol) dir = 1.0;        // want increase
        else if (!is_unbounded(hi_[b]) && xb_[i] > hi_[b] + opt_.feas_tol) dir = -1.0;
        if (dir == 0) continue;
        const double* row = &tab_[static_cast<std::size_t>(i) * cols_];
        // dPhi/dx_j = sum_below T[i][j] - sum_above T[i][j]
        for (int j = 0; j < cols_; ++j) g[j] += dir * row[j];
      }
      price = g.data();
    }

    // Pricing: most negative effective reduced cost (Dantzig), or first
    // eligible by index once the Bland fallback is armed.
    int q = -1;
    int sigma = 0;
    double best = phase1 ? -opt_.feas_tol : -opt_.opt_tol;
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (hi_[j] == lo_[j]) continue;  // fixed, cannot move
      double score = 0;
      int dir = 0;
      if (state_[j] == VarState::AtLower && price[j] < best) {
        score = price[j]; dir = 1;
      } else if (state_[j] == VarState::AtUpper && -price[j] < best) {
        score = -price[j]; dir = -1;
      } else if (state_[j] == VarState::FreeZero && std::fabs(price[j]) > -best) {
        score = -std::fabs(price[j]); dir = price[j] < 0 ? 1 : -1;
      } else {
        continue;
      }
      if (bland_) { q = j; sigma = dir; break; }
      if (score < best) { best = score; q = j; sigma = dir; }
    }
    if (q < 0) {
      if (phase1) {
        // No direction improves the infeasibility sum: certificate of
        // infeasibility if any remains.
        return phase1_infeasibility() > 10 * opt_.feas_tol ? LpStatus::Infeasible
                                                           : LpStatus::Optimal;
      }
      return LpStatus::Optimal;
    }

    // Ratio test along x_q moving sigma from its bound.
    double theta = kUnbounded;
    int block_row = -1;
    double block_pivot = 0;
    bool block_to_upper = false;
    if (lo_[q] != -kUnbounded && !is_unbounded(hi_[q])) {
      theta = hi_[q] - lo_[q];  // bound flip distance
    }
    for (int i = 0; i < rows_; ++i) {
      double t = tab(i, q);
      if (std::fabs(t) < opt_.pivot_tol) continue;
      int b = basis_[i];
      double delta = -sigma * t;  // change of x_B[i] per unit step
      double limit = kUnbounded;
      bool to_upper = false;
      bool below = xb_[i] < lo_[b] - opt_.feas_tol;
      bool above = !is_unbounded(hi_[b]) && xb_[i] > hi_[b] + opt_.feas_tol;
      if (phase1 && below) {
        if (delta > 0) { limit = (lo_[b] - xb_[i]) / delta; to_upper = false; }
      } else if (phase1 && above) {
        if (delta < 0) { limit = (hi_[b] - xb_[i]) / delta; to_upper = true; }
      } else if (delta > 0) {
        if (!is_unbounded(hi_[b])) { limit = (hi_[b] - xb_[i]) / delta; to_upper = true; }
      } else {
        if (lo_[b] != -kUnbounded) { limit = (lo_[b] - xb_[i]) / delta; to_upper = false; }
      }
      if (is_unbounded(limit)) continue;
      limit = std::max(limit, 0.0);
      if (limit < theta - 1e-12 ||
          (limit < theta + 1e-12 && block_row >= 0 &&
           (bland_ ? basis_[i] < basis_[block_row]
                   : std::fabs(t) > std::fabs(block_pivot)))) {
        theta = limit;
        block_row = i;
        block_pivot = t;
        block_to_upper = to_upper;
      }
    }

    if (is_unbounded(theta)) {
      if (phase1) return LpStatus::NumericalFailure;  // Phi >= 0 must block
      return LpStatus::Unbounded;
    }

    if (theta <= 1e-10) {
      if (++degenerate_streak_ > opt_.bland_threshold) bland_ = true;
    } else {
      degenerate_streak_ = 0;
      bland_ = false;
    }

    // Apply the step.
    for (int i = 0; i < rows_; ++i) {
      double t = tab(i, q);
      if (t != 0) xb_[i] -= sigma * theta * t;
    }
    if (block_row < 0) {
      // Bound flip: q traverses to its opposite bound.
      state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      ++iterations_;
      continue;
    }
    int leaving = basis_[block_row];
    double entering_value = nonbasic_value(q) + sigma * theta;
    state_[leaving] = block_to_upper ? VarState::AtUpper : VarState::AtLower;
    // Snap exactly to the bound to avoid drift.
    state_[q] = VarState::Basic;
    basis_[block_row] = q;
    pivot(block_row, q);
    xb_[block_row] = entering_value;
  }
}

LpStatus Simplex::dual_loop() {
  const long cap = 40L * (rows_ + 10) + 1000;
  long steps = 0;
  while (true) {
    if (iterations_ > opt_.iteration_limit) return LpStatus::IterationLimit;
    if (++steps > cap) return LpStatus::IterationLimit;

    int r = -1;
    double worst = opt_.feas_tol;
    bool below = false;
    for (int i = 0; i < rows_; ++i) {
      int b = basis_[i];
      double v1 = lo_[b] - xb_[i];
      double v2 = is_unbounded(hi_[b]) ? -1.0 : xb_[i] - hi_[b];
      if (v1 > worst) { worst = v1; r = i; below = true; }
      if (v2 > worst) { worst = v2; r = i; below = false; }
    }
    if (r < 0) return LpStatus::Optimal;

    const double* row = &tab_[static_cast<std::size_t>(r) * cols_];
    int q = -1;
    double best_ratio = 0;
    double best_pivot = 0;
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] == VarState::Basic || hi_[j] == lo_[j]) continue;
      double t = row[j];
      if (std::fabs(t) < opt_.pivot_tol) continue;
      bool candidate = false;
      if (below) {
        candidate = (state_[j] == VarState::AtLower && t < 0) ||
                    (state_[j] == VarState::AtUpper && t > 0) ||
                    state_[j] == VarState::FreeZero;
      } else {
        candidate = (state_[j] == VarState::AtLower && t > 0) ||
                    (state_[j] == VarState::AtUpper && t < 0) ||
                    state_[j] == VarState::FreeZero;
      }
      if (!candidate) continue;
      double ratio = std::fabs(zred_[j] / t);
      if (q < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && std::fabs(t) > std::fabs(best_pivot))) {
        q = j;
        best_ratio = ratio;
        best_pivot = t;
      }
    }
    if (q < 0) return LpStatus::Infeasible;  // row cannot be repaired

    int leaving = basis_[r];
    double beta = below ? lo_[leaving] : hi_[leaving];
    double d = (xb_[r] - beta) / row[q];
    double entering_value = nonbasic_value(q) + d;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double t = tab(i, q);
      if (t != 0) xb_[i] -= t * d;
    }
    state_[leaving] = below ? VarState::AtLower : VarState::AtUpper;
    state_[q] = VarState::Basic;
    basis_[r] = q;
    pivot(r, q);
    xb_[r] = entering_value;
  }
}

LpStatus Simplex::solve_from_scratch() {
  reset_slack_basis();
  LpStatus status = primal_loop(/*phase1=*/true);
  if (status != LpStatus::Optimal) return status;
  return primal_loop(/*phase1=*/false);
}

LpStatus Simplex::reoptimize() {
  snap_nonbasic();
  recompute_basic_values();
  if (!dual_feasible()) {
    recompute_reduced_costs();
    if (!dual_feasible()) {
      LpStatus status = primal_loop(true);
      if (status != LpStatus::Optimal) return status;
      return primal_loop(false);
    }
  }
  LpStatus status = dual_loop();
  if (status == LpStatus::IterationLimit) {
    // Dual stalled; rebuild and fall back to the primal path.
    if (!rebuild_from_basis()) reset_slack_basis();
    LpStatus s = primal_loop(true);
    if (s != LpStatus::Optimal) return s;
    return primal_loop(false);
  }
  if (status != LpStatus::Optimal) return status;
  // Polish: bound changes cannot break dual feasibility, but be defensive.
  return primal_loop(false);
}

bool Simplex::rebuild_from_basis() {
  // Dense LU of the basis matrix, then T = B^{-1}[A I].
  int m = rows_;
  if (m == 0) return true;
  std::vector<double> B(static_cast<std::size_t>(m) * m, 0.0);
  for (int k = 0; k < m; ++k) {
    int j = basis_[k];
    if (j >= n_) {
      B[static_cast<std::size_t>(j - n_) * m + k] = 1.0;
    } else {
      for (const auto& [i, coeff] : orig_cols_[j]) {
        B[static_cast<std::size_t>(i) * m + k] = coeff;
      }
    }
  }
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int col = 0; col < m; ++col) {
    int best = col;
    double mag = std::fabs(B[static_cast<std::size_t>(perm[col]) * m + col]);
    for (int i = col + 1; i < m; ++i) {
      double v = std::fabs(B[static_cast<std::size_t>(perm[i]) * m + col]);
      if (v > mag) { mag = v; best = i; }
    }
    if (mag < 1e-12) return false;  // singular basis
    std::swap(perm[col], perm[best]);
    double piv = B[static_cast<std::size_t>(perm[col]) * m + col];
    for (int i = col + 1; i < m; ++i) {
      double* ri = &B[static_cast<std::size_t>(perm[i]) * m];
      double factor = ri[col] / piv;
      ri[col] = factor;
      if (factor == 0) continue;
      const double* rc = &B[static_cast<std::size_t>(perm[col]) * m];
      for (int j = col + 1; j < m; ++j) ri[j] -= factor * rc[j];
    }
  }
  auto lu_solve = [&](std::vector<double>& y) {
    std::vector<double> z(m);
    for (int i = 0; i < m; ++i) {
      double v = y[perm[i]];
      const double* ri = &B[static_cast<std::size_t>(perm[i]) * m];
      for (int j = 0; j < i; ++j) v -= ri[j] * z[j];
      z[i] = v;
    }
    for (int i = m - 1; i >= 0; --i) {
      const double* ri = &B[static_cast<std::size_t>(perm[i]) * m];
      for (int j = i + 1; j < m; ++j) z[i] -= ri[j] * z[j];
      z[i] /= ri[i];
    }
    y = z;
  };
  std::vector<double> col(m);
  std::vector<double> fresh(static_cast<std::size_t>(m) * cols_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    if (j >= n_) {
      col[j - n_] = 1.0;
    } else {
      for (const auto& [i, coeff] : orig_cols_[j]) col[i] = coeff;
    }
    lu_solve(col);
    for (int i = 0; i < m; ++i) fresh[static_cast<std::size_t>(i) * cols_ + j] = col[i];
  }
  tab_ = std::move(fresh);
  recompute_basic_values();
  recompute_reduced_costs();
  return true;
}

double Simplex::objective() const {
  double value = 0;
  for (int i = 0; i < rows_; ++i) value += cost_[basis_[i]] * xb_[i];
  for (int j = 0; j < cols_; ++j) {
    if (state_[j] != VarState::Basic && cost_[j] != 0) {
      value += cost_[j] * nonbasic_value(j);
    }
  }
  return value;
}

std::vector<double> Simplex::values() const {
  std::vector<double> x(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] != VarState::Basic) x[j] = nonbasic_value(j);
  }
  for (int i = 0; i < rows_; ++i) {
    if (basis_[i] < n_) x[basis_[i]] = xb_[i];
  }
  return x;
}

std::vector<int> Simplex::violated_rows() const {
  std::vector<double> x = values();
  std::vector<int> out;
  for (int i = 0; i < rows_; ++i) {
    const auto& row = orig_rows_[i];
    double lhs = 0;
    for (const auto& [idx, coeff] : row.terms) lhs += coeff * x[idx];
    double viol = 0;
    switch (row.relation) {
      case mip::Relation::LessEqual: viol = lhs - row.rhs; break;
      case mip::Relation::GreaterEqual: viol = row.rhs - lhs; break;
      case mip::Relation::Equal: viol = std::fabs(lhs - row.rhs); break;
    }
    if (viol > 10 * opt_.feas_tol) out.push_back(i);
  }
  return out;
}

double Simplex::max_current_violation() const {
  std::vector<double> x(cols_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    if (state_[j] != VarState::Basic) x[j] = nonbasic_value(j);
  }
  for (int i = 0; i < rows_; ++i) x[basis_[i]] = xb_[i];
  double worst = 0;
  for (int j = 0; j < cols_; ++j) {
    if (lo_[j] != -kUnbounded) worst = std::max(worst, lo_[j] - x[j]);
    if (!is_unbounded(hi_[j])) worst = std::max(worst, x[j] - hi_[j]);
  }
  for (int i = 0; i < rows_; ++i) {
    double lhs = x[n_ + i];  // slack
    for (const auto& [idx, coeff] : orig_rows_[i].terms) lhs += coeff * x[idx];
    worst = std::max(worst, std::fabs(lhs - rhs_[i]));
  }
  return worst;
}

void Simplex::set_bound(int var, double lower, double upper) {
  lo_[var] = lower;
  hi_[var] = upper;
}

namespace {

LpSolution solve_impl(const LpProblem& problem, const LpOptions& options) {
  LpSolution sol;
  if (problem.rows.empty()) {
    // Degenerate case: pick the cost-preferred bound per variable.
    sol.x.assign(problem.num_vars(), 0.0);
    sol.value = 0;
    for (int j = 0; j < problem.num_vars(); ++j) {
      double c = problem.cost[j];
      double v;
      if (c > 0) {
        if (problem.lower[j] == -kUnbounded) { sol.status = LpStatus::Unbounded; return sol; }
        v = problem.lower[j];
      } else if (c < 0) {
        if (is_unbounded(problem.upper[j])) { sol.status = LpStatus::Unbounded; return sol; }
        v = problem.upper[j];
      } else {
        v = problem.lower[j] != -kUnbounded ? problem.lower[j]
            : !is_unbounded(problem.upper[j]) ? problem.upper[j] : 0.0;
      }
      sol.x[j] = v;
      sol.value += c * v;
    }
    sol.status = LpStatus::Optimal;
    return sol;
  }

  Simplex simplex(problem, options);
  LpStatus status = simplex.solve_from_scratch();
  sol.iterations = simplex.iterations();
  if (status == LpStatus::Optimal) {
    std::vector<double> x = simplex.values();
    if (max_point_violation(problem, x) > 1e-6) {
      // Numerical drift: one clean retry with tighter pivoting.
      LpOptions strict = options;
      strict.pivot_tol = 1e-11;
      Simplex retry(problem, strict);
      status = retry.solve_from_scratch();
      x = retry.values();
      sol.iterations += retry.iterations();
      if (status == LpStatus::Optimal && max_point_violation(problem, x) > 1e-6) {
        sol.status = LpStatus::NumericalFailure;
        return sol;
      }
    }
    if (status == LpStatus::Optimal) {
      sol.status = LpStatus::Optimal;
      sol.value = 0;
      for (int j = 0; j < problem.num_vars(); ++j) sol.value += problem.cost[j] * x[j];
      sol.x = std::move(x);
      return sol;
    }
  }
  sol.status = status;
  if (status == LpStatus::Infeasible) {
    sol.violated_rows = simplex.violated_rows();
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  return solve_impl(problem, options);
}

LpSolution solve_lp(const mip::MipModel& model, const LpOptions& options) {
  return solve_impl(LpProblem::from_model(model), options);
}

}  // namespace vne::lp
