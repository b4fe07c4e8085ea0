#pragma once

#include <functional>
#include <limits>

#include "qce/linalg.hpp"
#include "qce/random.hpp"

namespace qce {

struct NelderMeadOptions {
  double step = 0.3;          // initial simplex edge
  std::size_t max_evals = 2000;
  double ftol = 1e-11;        // stop when the simplex values agree this closely
  std::size_t max_restarts = 3;  // re-seed the simplex at the incumbent after convergence
  // Stop as soon as the objective reaches this value (minimization).
  double target = -std::numeric_limits<double>::infinity();
};

struct NelderMeadResult {
  RealVector x;
  double value;
  std::size_t evals;
};

// Minimizes f with adaptive Nelder-Mead.
NelderMeadResult nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& x0,
                             const NelderMeadOptions& opts = {});

// Unitary G(θ) on C^d from d(d−1) Givens angles/phases followed by d diagonal
// phases; G(0) = I.
std::size_t givens_param_count(std::size_t d);
Matrix givens_unitary(std::size_t d, const RealVector& params);

// Polar orthonormalization of base + Δ(params), where params holds the real
// and imaginary parts of Δ column-major (2·rows·cols entries).
Matrix polar_isometry(const Matrix& base, const RealVector& params);
std::size_t polar_param_count(std::size_t rows, std::size_t cols);

}  // namespace qce
