#include "qce/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qce {

namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

// Maps each flat index to its flat index after reordering subsystems.
std::vector<Eigen::Index> reorder_map(const Dims& dims, const std::vector<std::size_t>& order) {
  const std::size_t n = dims.size();
  if (order.size() != n) throw DimensionError("subsystem order has wrong length");
  std::vector<bool> seen(n, false);
  for (auto o : order) {
    if (o >= n || seen[o]) throw DimensionError("subsystem order is not a permutation");
    seen[o] = true;
  }
  const Dims new_dims = permute_dims(dims, order);
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  const std::size_t total = product(dims);
  std::vector<Eigen::Index> map(total);
  std::vector<std::size_t> digit(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = 0; k < n; ++k) {
      digit[k] = rem / old_strides[k];
      rem %= old_strides[k];
    }
    std::size_t target = 0;
    for (std::size_t k = 0; k < n; ++k) target += digit[order[k]] * new_strides[k];
    map[flat] = static_cast<Eigen::Index>(target);
  }
  return map;
}

}  // namespace

std::size_t product(const Dims& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

DensityOperator::DensityOperator(Dims dims, Matrix matrix) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("density operator needs at least one subsystem");
  for (auto d : dims_)
    if (d == 0) throw DimensionError("subsystem dimension must be positive");
  if (matrix.rows() != matrix.cols() || static_cast<std::size_t>(matrix.rows()) != product(dims_))
    throw DimensionError("density matrix side does not match subsystem dimensions");
  require_finite(matrix, "density matrix");
  if (hermiticity_defect(matrix) > tol::structural) throw DomainError("density matrix is not Hermitian");
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::structural) throw DomainError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::structural)
    throw DomainError("density matrix is not positive semidefinite");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Dims permute_dims(const Dims& dims, const std::vector<std::size_t>& order) {
  Dims out;
  out.reserve(order.size());
  for (auto o : order) {
    if (o >= dims.size()) throw DimensionError("subsystem index out of range");
    out.push_back(dims[o]);
  }
  return out;
}

Matrix permute_subsystems(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& order) {
  const auto total = static_cast<Eigen::Index>(product(dims));
  if (m.rows() != total || m.cols() != total) throw DimensionError("matrix does not match subsystem dimensions");
  const auto map = reorder_map(dims, order);
  Matrix out(total, total);
  for (Eigen::Index i = 0; i < total; ++i)
    for (Eigen::Index j = 0; j < total; ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

Matrix permutation_operator(const Dims& dims, const std::vector<std::size_t>& order) {
  const auto total = static_cast<Eigen::Index>(product(dims));
  const auto map = reorder_map(dims, order);
  Matrix p = Matrix::Zero(total, total);
  for (Eigen::Index i = 0; i < total; ++i) p(map[i], i) = 1.0;
  return p;
}

Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n || kept[k]) throw DimensionError("invalid subsystem set for partial trace");
    kept[k] = true;
  }
  std::vector<std::size_t> order;
  std::size_t dk = 1, dt = 1;
  for (std::size_t k = 0; k < n; ++k)
    if (kept[k]) {
      order.push_back(k);
      dk *= dims[k];
    }
  for (std::size_t k = 0; k < n; ++k)
    if (!kept[k]) {
      order.push_back(k);
      dt *= dims[k];
    }
  const Matrix p = permute_subsystems(m, dims, order);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  const auto DK = static_cast<Eigen::Index>(dk), DT = static_cast<Eigen::Index>(dt);
  for (Eigen::Index a = 0; a < DK; ++a)
    for (Eigen::Index b = 0; b < DK; ++b) {
      cplx s = 0.0;
      for (Eigen::Index t = 0; t < DT; ++t) s += p(a * DT + t, b * DT + t);
      out(a, b) = s;
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  Matrix reduced = partial_trace(rho.matrix(), rho.dims(), sorted);
  Dims d;
  for (auto k : sorted) d.push_back(rho.dims()[k]);
  if (d.empty()) d.push_back(1);
  return DensityOperator(std::move(d), std::move(reduced));
}

EigenSystem eigh_desc(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("eigendecomposition needs a square matrix");
  if (hermiticity_defect(h) > tol::structural) throw DomainError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const auto n = h.rows();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const RealVector& ev = es.eigenvalues();
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
  EigenSystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = ev(idx[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = es.eigenvectors().col(idx[static_cast<std::size_t>(k)]);
  }
  return out;
}

RealVector eig_desc(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("eigendecomposition needs a square matrix");
  if (hermiticity_defect(h) > tol::structural) throw DomainError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  RealVector v = es.eigenvalues().reverse();
  return v;
}

double prefix_sum(const RealVector& desc, std::size_t w) {
  const auto n = std::min<std::size_t>(w, static_cast<std::size_t>(desc.size()));
  return desc.head(static_cast<Eigen::Index>(n)).sum();
}

double kyfan(const Matrix& m, std::size_t w) {
  const auto side = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  if (w < 1 || w > side) throw DomainError("Ky-Fan index out of range");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().head(static_cast<Eigen::Index>(w)).sum();
}

bool majorizes(const RealVector& v, const RealVector& u) {
  if ((v.size() > 0 && v.minCoeff() < -1e-12) || (u.size() > 0 && u.minCoeff() < -1e-12))
    throw DomainError("majorization needs nonnegative vectors");
  if (std::abs(v.sum() - u.sum()) > tol::structural) throw DomainError("majorization needs equal sums");
  const auto n = std::max(v.size(), u.size());
  std::vector<double> a(v.data(), v.data() + v.size()), b(u.data(), u.data() + u.size());
  a.resize(static_cast<std::size_t>(n), 0.0);
  b.resize(static_cast<std::size_t>(n), 0.0);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sa += a[k];
    sb += b[k];
    if (sa < sb - tol::structural) return false;
  }
  return true;
}

DensityOperator purify(const DensityOperator& rho) {
  const auto es = eigh_desc(rho.matrix());
  Eigen::Index rank = 0;
  while (rank < es.values.size() && es.values(rank) > 1e-12) ++rank;
  if (rank == 0) rank = 1;
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Vector psi = Vector::Zero(n * rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const double w = std::sqrt(std::max(es.values(k), 0.0));
    for (Eigen::Index i = 0; i < n; ++i) psi(i * rank + k) = w * es.vectors(i, k);
  }
  psi.normalize();
  Dims dims = rho.dims();
  dims.push_back(static_cast<std::size_t>(rank));
  return DensityOperator(std::move(dims), psi * psi.adjoint());
}

Vector ket(std::size_t d, std::size_t i) {
  if (i >= d) throw DimensionError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Matrix basis_projector(std::size_t d, std::size_t i) { return projector(ket(d, i)); }

DensityOperator pure_state(const Dims& dims, const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw DomainError("zero vector is not a state");
  Vector v = psi / n;
  return DensityOperator(dims, v * v.adjoint());
}

Matrix phi_plus_unnormalized(std::size_t d) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t j = 0; j < d; ++j) v(static_cast<Eigen::Index>(j * d + j)) = 1.0;
  return v * v.adjoint();
}

DensityOperator phi_plus(std::size_t d) {
  return DensityOperator({d, d}, phi_plus_unnormalized(d) / static_cast<double>(d));
}

DensityOperator maximally_mixed(const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  return DensityOperator(dims, Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityOperator product_state(const DensityOperator& a, const DensityOperator& b) {
  Dims d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return DensityOperator(std::move(d), kron(a.matrix(), b.matrix()));
}

Matrix fourier_matrix(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix f(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      f(j, k) = s * std::polar(1.0, 2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(d));
  return f;
}

Matrix weyl_shift(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix x = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x((j + 1) % n, j) = 1.0;
  return x;
}

Matrix weyl_clock(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix z = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    z(j, j) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(d));
  return z;
}

}  // namespace qce
