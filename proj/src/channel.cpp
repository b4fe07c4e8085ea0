#include "qce/channel.hpp"

#include <cmath>

namespace qce {

namespace {

void require_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("noise parameter must lie in [0, 1]");
}

}  // namespace

QuantumChannel::QuantumChannel(Dims in_dims, Dims out_dims, std::vector<Matrix> kraus)
    : in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw DimensionError("channel needs at least one Kraus operator");
  const auto din = static_cast<Eigen::Index>(product(in_dims_));
  const auto dout = static_cast<Eigen::Index>(product(out_dims_));
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) throw DimensionError("Kraus operator shape does not match channel dims");
    require_finite(k, "Kraus operator");
    sum.noalias() += k.adjoint() * k;
  }
  if (max_abs(sum - Matrix::Identity(din, din)) > tol::reconstruction)
    throw DomainError("Kraus operators are not trace preserving");
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
  if (rho.dims() != in_dims_) throw DimensionError("state dims do not match channel input");
  return DensityOperator(out_dims_, apply(rho.matrix()));
}

Matrix QuantumChannel::apply(const Matrix& x) const {
  const auto din = static_cast<Eigen::Index>(in_dim());
  if (x.rows() != din || x.cols() != din) throw DimensionError("operator size does not match channel input");
  const auto dout = static_cast<Eigen::Index>(out_dim());
  Matrix out = Matrix::Zero(dout, dout);
  for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

QuantumChannel QuantumChannel::with_dims(Dims in_dims, Dims out_dims) const {
  if (product(in_dims) != in_dim() || product(out_dims) != out_dim())
    throw DimensionError("relabelled dims change the total dimension");
  return QuantumChannel(std::move(in_dims), std::move(out_dims), kraus_);
}

Matrix choi(const QuantumChannel& ch) {
  const auto din = static_cast<Eigen::Index>(ch.in_dim());
  const auto dout = static_cast<Eigen::Index>(ch.out_dim());
  Matrix j = Matrix::Zero(din * dout, din * dout);
  Vector v(din * dout);
  for (const auto& k : ch.kraus()) {
    for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    j.noalias() += v * v.adjoint();
  }
  return j;
}

QuantumChannel from_choi(const Matrix& j, const Dims& in_dims, const Dims& out_dims) {
  const auto din = static_cast<Eigen::Index>(product(in_dims));
  const auto dout = static_cast<Eigen::Index>(product(out_dims));
  if (j.rows() != din * dout || j.cols() != din * dout) throw DimensionError("Choi matrix size does not match dims");
  require_finite(j, "Choi matrix");
  if (hermiticity_defect(j) > tol::reconstruction) throw DomainError("Choi matrix is not Hermitian");
  const auto es = eigh_desc(0.5 * (j + j.adjoint()));
  if (es.values(es.values.size() - 1) < -tol::reconstruction) throw DomainError("not completely positive");
  const Matrix marginal = partial_trace(j, {product(in_dims), product(out_dims)}, {0});
  if (max_abs(marginal - Matrix::Identity(din, din)) > 1e-7) throw DomainError("not trace preserving");
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) <= 1e-10) break;
    Matrix op(dout, din);
    const double s = std::sqrt(es.values(k));
    for (Eigen::Index i = 0; i < din; ++i) op.col(i) = s * es.vectors.col(k).segment(i * dout, dout);
    kraus.push_back(std::move(op));
  }
  if (kraus.empty()) throw DomainError("Choi matrix is zero");
  // Truncation can leave a small TP defect; restore it exactly.
  Matrix s = Matrix::Zero(din, din);
  for (const auto& k : kraus) s.noalias() += k.adjoint() * k;
  const auto sd = eigh_desc(s);
  Matrix inv_sqrt = sd.vectors * sd.values.cwiseSqrt().cwiseInverse().asDiagonal() * sd.vectors.adjoint();
  for (auto& k : kraus) k = k * inv_sqrt;
  return QuantumChannel(in_dims, out_dims, std::move(kraus));
}

QuantumChannel compress(const QuantumChannel& ch) { return from_choi(choi(ch), ch.in_dims(), ch.out_dims()); }

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner) {
  if (outer.in_dim() != inner.out_dim()) throw DimensionError("composition dimension mismatch");
  std::vector<Matrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& a : outer.kraus())
    for (const auto& b : inner.kraus()) kraus.push_back(a * b);
  QuantumChannel out(inner.in_dims(), outer.out_dims(), std::move(kraus));
  if (out.kraus().size() > out.in_dim() * out.out_dim()) return compress(out);
  return out;
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> kraus;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  Dims in = a.in_dims(), out = a.out_dims();
  in.insert(in.end(), b.in_dims().begin(), b.in_dims().end());
  out.insert(out.end(), b.out_dims().begin(), b.out_dims().end());
  return QuantumChannel(std::move(in), std::move(out), std::move(kraus));
}

QuantumChannel mixture(const std::vector<double>& weights, const std::vector<QuantumChannel>& chans) {
  if (weights.size() != chans.size() || chans.empty()) throw DimensionError("mixture needs one weight per channel");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > tol::structural) throw DomainError("mixture weights must sum to 1");
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < chans.size(); ++k) {
    if (chans[k].in_dims() != chans[0].in_dims() || chans[k].out_dims() != chans[0].out_dims())
      throw DimensionError("mixture of channels with different shapes");
    if (weights[k] <= 0.0) continue;
    for (const auto& op : chans[k].kraus()) kraus.push_back(std::sqrt(weights[k]) * op);
  }
  return QuantumChannel(chans[0].in_dims(), chans[0].out_dims(), std::move(kraus));
}

Matrix apply_on(const QuantumChannel& ch, const Matrix& x, const Dims& dims, std::size_t k) {
  if (k >= dims.size() || dims[k] != ch.in_dim()) throw DimensionError("channel does not fit the chosen subsystem");
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < k; ++i) left *= dims[i];
  for (std::size_t i = k + 1; i < dims.size(); ++i) right *= dims[i];
  const auto L = static_cast<Eigen::Index>(left), R = static_cast<Eigen::Index>(right);
  const auto din = static_cast<Eigen::Index>(ch.in_dim()), dout = static_cast<Eigen::Index>(ch.out_dim());
  const Matrix il = Matrix::Identity(L, L), ir = Matrix::Identity(R, R);
  Matrix out = Matrix::Zero(L * dout * R, L * dout * R);
  if (x.rows() != L * din * R) throw DimensionError("operator does not match dims");
  for (const auto& op : ch.kraus()) {
    const Matrix full = kron(kron(il, op), ir);
    out.noalias() += full * x * full.adjoint();
  }
  return out;
}

DensityOperator apply_on(const QuantumChannel& ch, const DensityOperator& rho, std::size_t k) {
  Dims out = rho.dims();
  out[k] = ch.out_dim();
  return DensityOperator(out, apply_on(ch, rho.matrix(), rho.dims(), k));
}

QuantumChannel identity_channel(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return QuantumChannel({d}, {d}, {Matrix::Identity(n, n)});
}

QuantumChannel unitary_channel(const Matrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary must be square");
  if (max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > tol::reconstruction)
    throw DomainError("matrix is not unitary");
  const auto d = static_cast<std::size_t>(u.rows());
  return QuantumChannel({d}, {d}, {u});
}

QuantumChannel isometry_channel(const Matrix& v, Dims in_dims, Dims out_dims) {
  return QuantumChannel(std::move(in_dims), std::move(out_dims), {v});
}

QuantumChannel depolarizing(double gamma, std::size_t d) {
  require_gamma(gamma);
  const Matrix x = weyl_shift(d), z = weyl_clock(d);
  const double dd = static_cast<double>(d * d);
  std::vector<Matrix> kraus;
  Matrix xa = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    Matrix w = xa;
    for (std::size_t b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - gamma + gamma / dd : gamma / dd;
      if (weight > 0.0) kraus.push_back(std::sqrt(weight) * w);
      w = w * z;
    }
    xa = x * xa;
  }
  return QuantumChannel({d}, {d}, std::move(kraus));
}

QuantumChannel classical_identity(std::size_t d) {
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < d; ++i) kraus.push_back(basis_projector(d, i));
  return QuantumChannel({d}, {d}, std::move(kraus));
}

QuantumChannel dephasing(double gamma, std::size_t d) {
  require_gamma(gamma);
  return mixture({1.0 - gamma, gamma}, {identity_channel(d), classical_identity(d)});
}

QuantumChannel povm_channel(const std::vector<Matrix>& elements) {
  if (elements.empty()) throw DomainError("POVM needs at least one element");
  const auto d = elements[0].rows();
  const std::size_t n = elements.size();
  Matrix sum = Matrix::Zero(d, d);
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix& e = elements[k];
    if (e.rows() != d || e.cols() != d) throw DimensionError("POVM elements must share one square shape");
    if (hermiticity_defect(e) > tol::structural) throw DomainError("POVM element is not Hermitian");
    const auto es = eigh_desc(e);
    if (es.values(es.values.size() - 1) < -tol::structural) throw DomainError("POVM element is not positive");
    sum += e;
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
      if (es.values(j) <= 1e-12) continue;
      kraus.push_back(std::sqrt(es.values(j)) * ket(n, k) * es.vectors.col(j).adjoint());
    }
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > tol::structural) throw DomainError("POVM elements do not sum to identity");
  return QuantumChannel({static_cast<std::size_t>(d)}, {n}, std::move(kraus));
}

QuantumChannel amplitude_damping(double gamma) {
  require_gamma(gamma);
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({2}, {2}, {k0, k1});
}

QuantumChannel replacement(const DensityOperator& sigma, std::size_t d_in) {
  const auto es = eigh_desc(sigma.matrix());
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) <= 1e-14) continue;
    for (std::size_t i = 0; i < d_in; ++i)
      kraus.push_back(std::sqrt(es.values(k)) * es.vectors.col(k) * ket(d_in, i).adjoint());
  }
  return QuantumChannel({d_in}, sigma.dims(), std::move(kraus));
}

QuantumChannel completely_randomizing(std::size_t d) { return replacement(maximally_mixed({d}), d); }

QuantumChannel append_state(const DensityOperator& sigma, std::size_t d_in) {
  const auto es = eigh_desc(sigma.matrix());
  const auto n = static_cast<Eigen::Index>(d_in);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) <= 1e-14) continue;
    kraus.push_back(std::sqrt(es.values(k)) * kron(Matrix::Identity(n, n), es.vectors.col(k)));
  }
  Dims out{d_in};
  out.insert(out.end(), sigma.dims().begin(), sigma.dims().end());
  return QuantumChannel({d_in}, std::move(out), std::move(kraus));
}

QuantumChannel trace_out(const Dims& dims, std::size_t k) {
  if (k >= dims.size()) throw DimensionError("subsystem index out of range");
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < k; ++i) left *= dims[i];
  for (std::size_t i = k + 1; i < dims.size(); ++i) right *= dims[i];
  const Matrix il = Matrix::Identity(static_cast<Eigen::Index>(left), static_cast<Eigen::Index>(left));
  const Matrix ir = Matrix::Identity(static_cast<Eigen::Index>(right), static_cast<Eigen::Index>(right));
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < dims[k]; ++i) kraus.push_back(kron(kron(il, ket(dims[k], i).adjoint()), ir));
  Dims out;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (i != k) out.push_back(dims[i]);
  if (out.empty()) out.push_back(1);
  return QuantumChannel(dims, std::move(out), std::move(kraus));
}

QuantumChannel permutation_channel(const Dims& dims, const std::vector<std::size_t>& order) {
  return QuantumChannel(dims, permute_dims(dims, order), {permutation_operator(dims, order)});
}

std::vector<ZooKind> all_zoo_kinds() {
  return {ZooKind::Unitary,         ZooKind::ClassicalIdentity, ZooKind::Depolarizing, ZooKind::Povm,
          ZooKind::AmplitudeDamping, ZooKind::Replacement,      ZooKind::Dephasing};
}

std::string zoo_name(ZooKind kind) {
  switch (kind) {
    case ZooKind::Unitary: return "unitary";
    case ZooKind::ClassicalIdentity: return "classical_identity";
    case ZooKind::Depolarizing: return "depolarizing";
    case ZooKind::Povm: return "povm";
    case ZooKind::AmplitudeDamping: return "amplitude_damping";
    case ZooKind::Replacement: return "replacement";
    case ZooKind::Dephasing: return "dephasing";
  }
  throw DomainError("unknown channel kind");
}

ZooKind zoo_kind_from_name(const std::string& name) {
  for (auto k : all_zoo_kinds())
    if (zoo_name(k) == name) return k;
  throw DomainError("unknown channel kind: " + name);
}

DensityOperator zoo_replacement_state(double gamma) {
  require_gamma(gamma);
  return DensityOperator({2}, (1.0 - gamma) * basis_projector(2, 0) + gamma * maximally_mixed({2}).matrix());
}

QuantumChannel make_zoo(ZooKind kind, double gamma) {
  require_gamma(gamma);
  switch (kind) {
    case ZooKind::Unitary: {
      Matrix h(2, 2);
      h << 1.0, 1.0, 1.0, -1.0;
      return unitary_channel(h / std::sqrt(2.0));
    }
    case ZooKind::ClassicalIdentity: return classical_identity(2);
    case ZooKind::Depolarizing: return depolarizing(gamma, 2);
    case ZooKind::Povm: return povm_channel({basis_projector(2, 0), basis_projector(2, 1)});
    case ZooKind::AmplitudeDamping: return amplitude_damping(gamma);
    case ZooKind::Replacement: return replacement(zoo_replacement_state(gamma), 2);
    case ZooKind::Dephasing: return dephasing(gamma, 2);
  }
  throw DomainError("unknown channel kind");
}

}  // namespace qce
