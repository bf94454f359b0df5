#pragma once

// Small dense linear-algebra helpers, an exact-pivot simplex LP solver and
// least-squares fits. Everything is double precision and sized for problems
// with at most a few dozen variables.

#include <Eigen/Dense>

#include <limits>
#include <utility>
#include <vector>

#include "mahler/errors.hpp"

namespace mahler {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double determinant(const Mat& m);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double exponent = 0.0;  // equals slope; for fit_loglog this is the power law
  double residual = 0.0;  // root mean squared residual in fit space
};

FitResult fit_linear(const std::vector<std::pair<double, double>>& pts);
FitResult fit_loglog(const std::vector<std::pair<double, double>>& pts);

// maximize objective.x  subject to  row_i.x = rhs_i  and per-variable bounds.
// Variables default to x >= 0; set_free(i) removes the lower bound.
class LinearProgram {
 public:
  explicit LinearProgram(int nvars);

  void set_objective(const Vec& c);
  void add_equality(const Vec& row, double rhs);
  void set_free(int i);
  void set_bounds(int i, double lo, double hi);

  int num_vars() const { return nvars_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Vec& objective() const { return objective_; }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

 private:
  int nvars_;
  Vec objective_;
  std::vector<Vec> rows_;
  std::vector<double> rhs_;
  std::vector<double> lower_, upper_;
};

struct LpSolution {
  double value = 0.0;
  Vec x;
};

// Dense two-phase simplex with Bland's anti-cycling pivot rule. Deterministic:
// entering variable is the lowest eligible index, ratio-test ties break toward
// the lowest basic index. Throws LpInfeasibleError / LpUnboundedError.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace mahler
