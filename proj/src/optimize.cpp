#include "qce/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qce {

namespace {

struct Simplex {
  std::vector<RealVector> pts;
  std::vector<double> vals;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& x0,
                             const NelderMeadOptions& opts) {
  const auto n = x0.size();
  std::size_t evals = 0;
  auto eval = [&](const RealVector& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  RealVector best_x = x0;
  double best = eval(x0);
  if (n == 0 || best <= opts.target) return {best_x, best, evals};

  const double dn = static_cast<double>(n);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

  for (std::size_t round = 0; round <= opts.max_restarts && evals < opts.max_evals; ++round) {
    const double step = opts.step / std::pow(4.0, static_cast<double>(round));
    Simplex s;
    s.pts.push_back(best_x);
    s.vals.push_back(best);
    for (Eigen::Index i = 0; i < n; ++i) {
      RealVector p = best_x;
      p(i) += step;
      s.pts.push_back(p);
      s.vals.push_back(eval(p));
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(n + 1));
    const double start_best = best;
    while (evals < opts.max_evals) {
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.vals[a] < s.vals[b]; });
      const std::size_t lo = idx.front(), hi = idx.back(), second = idx[idx.size() - 2];
      if (s.vals[lo] <= opts.target) break;
      if (std::abs(s.vals[hi] - s.vals[lo]) <= opts.ftol * (1.0 + std::abs(s.vals[lo]))) break;
      RealVector centroid = RealVector::Zero(n);
      for (std::size_t k = 0; k < s.pts.size(); ++k)
        if (k != hi) centroid += s.pts[k];
      centroid /= dn;
      const RealVector xr = centroid + alpha * (centroid - s.pts[hi]);
      const double fr = eval(xr);
      if (fr < s.vals[lo]) {
        const RealVector xe = centroid + beta * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          s.pts[hi] = xe;
          s.vals[hi] = fe;
        } else {
          s.pts[hi] = xr;
          s.vals[hi] = fr;
        }
        continue;
      }
      if (fr < s.vals[second]) {
        s.pts[hi] = xr;
        s.vals[hi] = fr;
        continue;
      }
      const bool outside = fr < s.vals[hi];
      const RealVector xc = outside ? RealVector(centroid + gamma * (xr - centroid))
                                    : RealVector(centroid - gamma * (centroid - s.pts[hi]));
      const double fc = eval(xc);
      if (fc < std::min(fr, s.vals[hi])) {
        s.pts[hi] = xc;
        s.vals[hi] = fc;
        continue;
      }
      for (std::size_t k = 0; k < s.pts.size(); ++k) {
        if (k == lo) continue;
        s.pts[k] = s.pts[lo] + delta * (s.pts[k] - s.pts[lo]);
        s.vals[k] = eval(s.pts[k]);
      }
    }
    for (std::size_t k = 0; k < s.pts.size(); ++k)
      if (s.vals[k] < best) {
        best = s.vals[k];
        best_x = s.pts[k];
      }
    if (best <= opts.target) break;
    // A restart that gained nothing means the incumbent is converged.
    if (round > 0 && start_best - best <= opts.ftol * (1.0 + std::abs(best))) break;
  }
  return {best_x, best, evals};
}

std::size_t givens_param_count(std::size_t d) { return d * (d - 1) + d; }

Matrix givens_unitary(std::size_t d, const RealVector& params) {
  if (static_cast<std::size_t>(params.size()) != givens_param_count(d)) throw DimensionError("wrong Givens parameter count");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix u = Matrix::Identity(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double th = params(k++), ph = params(k++);
      const double c = std::cos(th), s = std::sin(th);
      const cplx e = std::polar(1.0, ph);
      // Right-multiply by the rotation acting on columns i, j.
      const Vector ci = u.col(i), cj = u.col(j);
      u.col(i) = c * ci + std::conj(e) * s * cj;
      u.col(j) = -e * s * ci + c * cj;
    }
  for (Eigen::Index i = 0; i < n; ++i) u.col(i) *= std::polar(1.0, params(k++));
  return u;
}

std::size_t polar_param_count(std::size_t rows, std::size_t cols) { return 2 * rows * cols; }

Matrix polar_isometry(const Matrix& base, const RealVector& params) {
  const auto r = base.rows(), c = base.cols();
  if (params.size() != 2 * r * c) throw DimensionError("wrong polar parameter count");
  Matrix m = base;
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) += cplx(params(2 * (j * r + i)), params(2 * (j * r + i) + 1));
  // m (m†m)^{-1/2}; fall back to the base when m loses rank.
  const Matrix g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()));
  if (es.eigenvalues().minCoeff() < 1e-12) return base;
  const Matrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  return m * inv_sqrt;
}

}  // namespace qce
