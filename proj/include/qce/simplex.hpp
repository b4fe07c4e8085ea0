#pragma once

#include "qce/linalg.hpp"

namespace qce {

enum class LpStatus { Feasible, Infeasible };

struct LpResult {
  LpStatus status;
  RealVector x;       // a feasible point when status is Feasible
  double residual;    // ‖Ax − b‖_∞ of the returned point
  double infeasibility;  // optimal phase-one objective
  std::size_t pivots;
};

// Decides whether {x ≥ 0 : Ax = b} is nonempty with a dense phase-one simplex
// (Dantzig pricing, Bland fallback). Throws NumericalError when the solver
// breaks down, which is distinct from reporting infeasibility.
LpResult lp_feasible(const RealMatrix& a, const RealVector& b, double tol = 1e-7);

}  // namespace qce
