#include "mahler/numkit.hpp"

#include <cmath>
#include <cstddef>

namespace mahler {

double determinant(const Mat& m) {
  if (m.rows() != m.cols())
    throw GeomError("determinant: matrix is not square");
  if (m.rows() == 0) return 1.0;
  return m.determinant();
}

namespace {

FitResult least_squares(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t m = pts.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-14 * (1.0 + sxx * m))
    throw GeomError("fit: abscissae are numerically identical");
  FitResult r;
  r.slope = (m * sxy - sx * sy) / denom;
  r.intercept = (sy - r.slope * sx) / m;
  r.exponent = r.slope;
  double ssr = 0;
  for (const auto& [x, y] : pts) {
    const double e = y - (r.slope * x + r.intercept);
    ssr += e * e;
  }
  r.residual = std::sqrt(ssr / m);
  return r;
}

}  // namespace

FitResult fit_linear(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3)
    throw GeomError("fit_linear: need at least 3 points");
  return least_squares(pts);
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3)
    throw GeomError("fit_loglog: need at least 3 points");
  std::vector<std::pair<double, double>> logs;
  logs.reserve(pts.size());
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0))
      throw GeomError("fit_loglog: inputs must be strictly positive");
    logs.emplace_back(std::log(x), std::log(y));
  }
  return least_squares(logs);
}

LinearProgram::LinearProgram(int nvars) : nvars_(nvars) {
  if (nvars <= 0) throw GeomError("LinearProgram: need at least one variable");
  objective_ = Vec::Zero(nvars);
  lower_.assign(nvars, 0.0);
  upper_.assign(nvars, kInf);
}

void LinearProgram::set_objective(const Vec& c) {
  if (c.size() != nvars_) throw GeomError("LinearProgram: objective size mismatch");
  objective_ = c;
}

void LinearProgram::add_equality(const Vec& row, double rhs) {
  if (row.size() != nvars_) throw GeomError("LinearProgram: row size mismatch");
  rows_.push_back(row);
  rhs_.push_back(rhs);
}

void LinearProgram::set_free(int i) {
  lower_.at(i) = -kInf;
  upper_.at(i) = kInf;
}

void LinearProgram::set_bounds(int i, double lo, double hi) {
  if (lo > hi) throw GeomError("LinearProgram: empty bound interval");
  lower_.at(i) = lo;
  upper_.at(i) = hi;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr int kMaxPivots = 50000;

// Full-tableau simplex state for min c.x, T x = b, x >= 0, b >= 0.
struct Tableau {
  Mat t;                  // m x (ncols + 1), last column is the rhs
  std::vector<int> basis; // basic variable per row
  int m, ncols;

  double rhs(int i) const { return t(i, ncols); }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[row] = col;
  }
};

// Bland's rule over a cost vector. banned columns are never entered.
// Returns true on optimality, throws LpUnboundedError otherwise.
bool simplex_iterate(Tableau& tb, Vec& cost, const std::vector<bool>& banned) {
  for (int it = 0; it < kMaxPivots; ++it) {
    int enter = -1;
    for (int j = 0; j < tb.ncols; ++j) {
      if (banned[j]) continue;
      if (cost[j] < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best = 0;
    for (int i = 0; i < tb.m; ++i) {
      const double a = tb.t(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tb.rhs(i) / a;
      if (leave < 0 || ratio < best - 1e-15 ||
          (std::abs(ratio - best) <= 1e-15 && tb.basis[i] < tb.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) throw LpUnboundedError("lp: unbounded");
    const double cf = cost[enter];
    const int col = enter;
    tb.pivot(leave, col);
    // keep the reduced-cost row in sync with the pivot
    if (cf != 0.0) {
      for (int j = 0; j <= tb.ncols; ++j) {
        // cost has no rhs slot; handled below
        if (j < tb.ncols) cost[j] -= cf * tb.t(leave, j);
      }
    }
  }
  throw GeomError("lp: pivot limit exceeded");
}

Vec reduced_costs(const Tableau& tb, const Vec& c) {
  Vec r = c;
  for (int i = 0; i < tb.m; ++i) {
    const double cb = c[tb.basis[i]];
    if (cb != 0.0)
      for (int j = 0; j < tb.ncols; ++j) r[j] -= cb * tb.t(i, j);
  }
  return r;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int k = lp.num_vars();
  const int m0 = lp.num_rows();

  // Expand to standard form: shift finite lower bounds, split free variables,
  // turn finite upper bounds into extra slack rows.
  struct Col {
    int var;
    double sign;  // +1 for the positive part, -1 for the negative part
  };
  std::vector<Col> cols;
  std::vector<double> offset(k, 0.0);
  std::vector<int> pos_col(k, -1), neg_col(k, -1);
  for (int i = 0; i < k; ++i) {
    const double lo = lp.lower()[i];
    if (std::isfinite(lo)) {
      offset[i] = lo;
      pos_col[i] = static_cast<int>(cols.size());
      cols.push_back({i, +1.0});
    } else {
      pos_col[i] = static_cast<int>(cols.size());
      cols.push_back({i, +1.0});
      neg_col[i] = static_cast<int>(cols.size());
      cols.push_back({i, -1.0});
    }
  }
  struct BoundRow {
    int var;
    double rhs;
  };
  std::vector<BoundRow> bound_rows;
  for (int i = 0; i < k; ++i) {
    const double hi = lp.upper()[i];
    if (!std::isfinite(hi)) continue;
    const double lo = lp.lower()[i];
    bound_rows.push_back({i, std::isfinite(lo) ? hi - lo : hi});
  }

  const int nstruct = static_cast<int>(cols.size());
  const int nslack = static_cast<int>(bound_rows.size());
  const int m = m0 + nslack;
  const int nart = m;
  const int ncols = nstruct + nslack + nart;

  Tableau tb;
  tb.m = m;
  tb.ncols = ncols;
  tb.t = Mat::Zero(m, ncols + 1);
  tb.basis.assign(m, -1);

  for (int r = 0; r < m0; ++r) {
    const Vec& row = lp.rows()[r];
    double rhs = lp.rhs()[r];
    for (int i = 0; i < k; ++i) rhs -= row[i] * offset[i];
    for (int c = 0; c < nstruct; ++c)
      tb.t(r, c) = row[cols[c].var] * cols[c].sign;
    tb.t(r, ncols) = rhs;
  }
  for (int s = 0; s < nslack; ++s) {
    const int r = m0 + s;
    const int v = bound_rows[s].var;
    tb.t(r, pos_col[v]) = 1.0;
    if (neg_col[v] >= 0) tb.t(r, neg_col[v]) = -1.0;
    tb.t(r, nstruct + s) = 1.0;
    tb.t(r, ncols) = bound_rows[s].rhs;
  }
  for (int r = 0; r < m; ++r) {
    if (tb.t(r, ncols) < 0) tb.t.row(r) *= -1.0;
    tb.t(r, nstruct + nslack + r) = 1.0;
    tb.basis[r] = nstruct + nslack + r;
  }

  // Phase 1: minimize the sum of artificials.
  Vec phase1 = Vec::Zero(ncols);
  for (int j = nstruct + nslack; j < ncols; ++j) phase1[j] = 1.0;
  std::vector<bool> none(ncols, false);
  Vec cost1 = reduced_costs(tb, phase1);
  simplex_iterate(tb, cost1, none);
  double art_sum = 0;
  for (int r = 0; r < m; ++r)
    if (tb.basis[r] >= nstruct + nslack) art_sum += tb.rhs(r);
  if (art_sum > kFeasTol) throw LpInfeasibleError("lp: infeasible");

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<bool> row_dead(m, false);
  for (int r = 0; r < m; ++r) {
    if (tb.basis[r] < nstruct + nslack) continue;
    int col = -1;
    for (int j = 0; j < nstruct + nslack; ++j) {
      if (std::abs(tb.t(r, j)) > kPivotTol) {
        col = j;
        break;
      }
    }
    if (col >= 0)
      tb.pivot(r, col);
    else
      row_dead[r] = true;  // redundant constraint
  }

  // Phase 2 objective (minimize -objective).
  Vec c2 = Vec::Zero(ncols);
  for (int c = 0; c < nstruct; ++c)
    c2[c] = -lp.objective()[cols[c].var] * cols[c].sign;
  std::vector<bool> banned(ncols, false);
  for (int j = nstruct + nslack; j < ncols; ++j) banned[j] = true;
  // dead rows keep their artificial basic at value zero; ban pivoting there by
  // leaving the artificial basic and never entering artificial columns.
  Vec cost2 = reduced_costs(tb, c2);
  simplex_iterate(tb, cost2, banned);

  Vec xstd = Vec::Zero(ncols);
  for (int r = 0; r < m; ++r)
    if (!row_dead[r]) xstd[tb.basis[r]] = tb.rhs(r);

  LpSolution sol;
  sol.x = Vec::Zero(k);
  for (int i = 0; i < k; ++i) {
    double v = offset[i];
    if (pos_col[i] >= 0) v += xstd[pos_col[i]];
    if (neg_col[i] >= 0) v -= xstd[neg_col[i]];
    sol.x[i] = v;
  }
  sol.value = lp.objective().dot(sol.x);
  return sol;
}

}  // namespace mahler
