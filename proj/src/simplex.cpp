#include "qce/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qce {

LpResult lp_feasible(const RealMatrix& a, const RealVector& b, double tol) {
  const Eigen::Index m = a.rows(), n = a.cols();
  if (b.size() != m) throw DimensionError("LP right-hand side has the wrong length");
  if (!a.allFinite() || !b.allFinite()) throw DomainError("LP data has non-finite entries");

  // Tableau [A | I | b] with rows sign-flipped so b ≥ 0; last row is the
  // reduced cost of minimizing the sum of artificials.
  const Eigen::Index cols = n + m + 1;
  RealMatrix tab = RealMatrix::Zero(m + 1, cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b(i) < 0.0 ? -1.0 : 1.0;
    tab.row(i).head(n) = s * a.row(i);
    tab(i, n + i) = 1.0;
    tab(i, cols - 1) = s * b(i);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  for (Eigen::Index i = 0; i < m; ++i) tab.row(m) -= tab.row(i);
  tab.row(m).segment(n, m).setZero();

  const double pivot_eps = 1e-9;
  const std::size_t max_pivots = static_cast<std::size_t>(50 * (m + n) + 1000);
  std::size_t pivots = 0, degenerate_run = 0;
  for (;;) {
    // Dantzig pricing; after a run of degenerate pivots switch to Bland's
    // rule, which cannot cycle. Artificials never re-enter.
    const bool bland = degenerate_run > static_cast<std::size_t>(m);
    Eigen::Index enter = -1;
    double most = -1e-10;
    for (Eigen::Index j = 0; j < n; ++j)
      if (tab(m, j) < most) {
        enter = j;
        if (bland) break;
        most = tab(m, j);
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab(i, enter) <= pivot_eps) continue;
      const double ratio = tab(i, cols - 1) / tab(i, enter);
      if (leave < 0 || ratio < best - 1e-14 ||
          (std::abs(ratio - best) <= 1e-14 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    // Phase one is bounded below by zero, so an unbounded ray means breakdown.
    if (leave < 0) throw NumericalError("LP phase one reported an unbounded direction");
    degenerate_run = best <= 1e-12 ? degenerate_run + 1 : 0;
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && tab(i, enter) != 0.0) tab.row(i) -= tab(i, enter) * tab.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
    if (++pivots > max_pivots) throw NumericalError("LP exceeded its pivot budget");
  }

  RealVector x = RealVector::Zero(n);
  double infeasibility = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = basis[static_cast<std::size_t>(i)];
    const double v = std::max(0.0, tab(i, cols - 1));
    if (j < n)
      x(j) = v;
    else
      infeasibility += v;
  }
  const double residual = m == 0 ? 0.0 : (a * x - b).cwiseAbs().maxCoeff();
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (infeasibility > tol * scale) return {LpStatus::Infeasible, x, residual, infeasibility, pivots};
  if (residual > tol * scale) throw NumericalError("LP point violates its constraints beyond tolerance");
  return {LpStatus::Feasible, x, residual, infeasibility, pivots};
}

}  // namespace qce
