#include "qce/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

namespace qce {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t Rng::categorical(const RealVector& weights) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw DomainError("categorical weights must have positive mass");
  double u = uniform() * total;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    u -= std::max(weights(k), 0.0);
    if (u < 0.0) return static_cast<std::size_t>(k);
  }
  // Round-off landed past the end: return the last index with mass.
  for (Eigen::Index k = weights.size(); k-- > 0;)
    if (weights(k) > 0.0) return static_cast<std::size_t>(k);
  return 0;
}

Matrix haar_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

Matrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw DimensionError("isometry needs rows >= cols");
  return haar_unitary(rows, rng).leftCols(static_cast<Eigen::Index>(cols));
}

Vector random_pure(std::size_t d, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v.normalized();
}

DensityOperator random_density(const Dims& dims, std::size_t rank, Rng& rng) {
  if (rank == 0) throw DomainError("rank must be positive");
  const std::size_t n = product(dims);
  const Vector psi = random_pure(n * rank, rng);
  Matrix full = psi * psi.adjoint();
  return DensityOperator(dims, partial_trace(full, {n, rank}, {0}));
}

DensityOperator random_density(const Dims& dims, Rng& rng) { return random_density(dims, product(dims), rng); }

RealVector random_pmf(std::size_t n, Rng& rng) {
  RealVector p(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = -std::log(1.0 - rng.uniform());
  return p / p.sum();
}

RealMatrix random_column_stochastic(std::size_t rows, std::size_t cols, Rng& rng) {
  RealMatrix t(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < t.cols(); ++j) t.col(j) = random_pmf(rows, rng);
  return t;
}

RealMatrix random_doubly_stochastic(std::size_t n, std::size_t terms, Rng& rng) {
  const RealVector w = random_pmf(terms, rng);
  RealMatrix d = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < terms; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::size_t i = 0; i < n; ++i)
      d(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) += w(static_cast<Eigen::Index>(k));
  }
  return d;
}

DensityOperator random_separable(std::size_t da, std::size_t db, std::size_t terms, Rng& rng) {
  const std::size_t k = 1 + rng.index(terms);
  const RealVector w = random_pmf(k, rng);
  const auto n = static_cast<Eigen::Index>(da * db);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < k; ++j) {
    const Vector psi = kron(random_pure(da, rng), random_pure(db, rng));
    m += w(static_cast<Eigen::Index>(j)) * psi * psi.adjoint();
  }
  return DensityOperator({da, db}, m);
}

}  // namespace qce
