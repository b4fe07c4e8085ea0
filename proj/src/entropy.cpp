#include "qce/entropy.hpp"

#include <cmath>
#include <limits>

namespace qce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Groups dims into [∏ first split, ∏ rest].
Dims bipartition(const Dims& dims, std::size_t split) {
  if (dims.size() < 2 || split == 0 || split >= dims.size())
    throw DimensionError("conditional entropy needs a bipartite split");
  std::size_t a = 1, b = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) (i < split ? a : b) *= dims[i];
  return {a, b};
}

// Projector onto the eigenvectors of h with eigenvalue above the cutoff.
struct Support {
  Matrix basis;  // columns span the support
  RealVector values;
};

Support support_of(const Matrix& h) {
  const auto es = eigh_desc(h);
  Eigen::Index r = 0;
  while (r < es.values.size() && es.values(r) > support_cutoff) ++r;
  return {es.vectors.leftCols(r), es.values.head(r)};
}

double umegaki(const Matrix& rho, const Matrix& sigma) {
  const auto sr = support_of(rho);
  const auto ss = support_of(sigma);
  // ρ must vanish outside supp σ.
  const Matrix outside = sr.basis - ss.basis * (ss.basis.adjoint() * sr.basis);
  for (Eigen::Index k = 0; k < sr.values.size(); ++k)
    if (sr.values(k) * outside.col(k).squaredNorm() > 1e-10) return kInf;
  double t1 = 0.0;
  for (Eigen::Index k = 0; k < sr.values.size(); ++k) t1 += sr.values(k) * std::log2(sr.values(k));
  // Tr[ρ log σ] on the support of σ.
  const Matrix rho_in = ss.basis.adjoint() * rho * ss.basis;
  double t2 = 0.0;
  for (Eigen::Index k = 0; k < ss.values.size(); ++k) t2 += rho_in(k, k).real() * std::log2(ss.values(k));
  return std::max(0.0, t1 - t2);
}

double dmax(const Matrix& rho, const Matrix& sigma) {
  const auto sr = support_of(rho);
  const auto ss = support_of(sigma);
  const Matrix outside = sr.basis - ss.basis * (ss.basis.adjoint() * sr.basis);
  for (Eigen::Index k = 0; k < sr.values.size(); ++k)
    if (sr.values(k) * outside.col(k).squaredNorm() > 1e-10) return kInf;
  const RealVector inv_sqrt = ss.values.cwiseSqrt().cwiseInverse();
  const Matrix m = inv_sqrt.asDiagonal() * (ss.basis.adjoint() * rho * ss.basis) * inv_sqrt.asDiagonal();
  const double lam = eig_desc(0.5 * (m + m.adjoint()))(0);
  return std::max(0.0, std::log2(lam));
}

}  // namespace

std::string divergence_name(Divergence d) { return d == Divergence::Umegaki ? "umegaki" : "dmax"; }

Divergence divergence_from_name(const std::string& name) {
  if (name == "umegaki") return Divergence::Umegaki;
  if (name == "dmax") return Divergence::Dmax;
  throw DomainError("unknown divergence: " + name);
}

double vn_entropy(const RealVector& spectrum) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k)
    if (spectrum(k) > support_cutoff) h -= spectrum(k) * std::log2(spectrum(k));
  return std::max(0.0, h);
}

double vn_entropy(const DensityOperator& rho) { return vn_entropy(eig_desc(rho.matrix())); }

double shannon_entropy(const RealVector& p) { return vn_entropy(p); }

double divergence(Divergence d, const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimensionError("divergence arguments differ in size");
  return d == Divergence::Umegaki ? umegaki(rho, sigma) : dmax(rho, sigma);
}

double divergence(Divergence d, const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("divergence arguments differ in size");
  return divergence(d, rho.matrix(), sigma.matrix());
}

double cond_entropy_down(const DensityOperator& rho, Divergence d, std::size_t split) {
  const Dims ab = bipartition(rho.dims(), split);
  const Matrix rb = partial_trace(rho.matrix(), ab, {1});
  const auto na = static_cast<Eigen::Index>(ab[0]);
  const Matrix ref = kron(Matrix::Identity(na, na) / static_cast<double>(ab[0]), rb);
  return std::log2(static_cast<double>(ab[0])) - divergence(d, rho.matrix(), ref);
}

double vn_cond_entropy(const DensityOperator& rho, std::size_t split) {
  const Dims ab = bipartition(rho.dims(), split);
  const RealVector sab = eig_desc(rho.matrix());
  const RealVector sb = eig_desc(partial_trace(rho.matrix(), ab, {1}));
  return vn_entropy(sab) - vn_entropy(sb);
}

double coherent_information(const DensityOperator& rho) { return -vn_cond_entropy(rho); }

double dual_cond_entropy(const CondEntropyFn& h, const DensityOperator& rho) {
  const Dims ab = bipartition(rho.dims(), 1);
  const DensityOperator flat(ab, rho.matrix());
  const auto phi = purify(flat);
  const Dims dims = phi.dims();  // [A, B, C]
  const DensityOperator ac({dims[0], dims[2]}, partial_trace(phi.matrix(), dims, {0, 2}));
  return -h(ac);
}

DensityOperator interleave_pair(const DensityOperator& rho, const DensityOperator& tau) {
  if (rho.dims().size() != 2 || tau.dims().size() != 2) throw DimensionError("both states must be bipartite");
  const Dims all{rho.dims()[0], rho.dims()[1], tau.dims()[0], tau.dims()[1]};
  const Matrix m = permute_subsystems(kron(rho.matrix(), tau.matrix()), all, {0, 2, 1, 3});
  return DensityOperator({all[0] * all[2], all[1] * all[3]}, m);
}

}  // namespace qce
