#include "qce/cusc.hpp"

#include <algorithm>
#include <cmath>

namespace qce {

namespace {

struct Bipartite {
  std::size_t a, b, a2, b2;
};

Bipartite bipartite_dims(const QuantumChannel& ch) {
  if (ch.in_dims().size() != 2 || ch.out_dims().size() != 2)
    throw DimensionError("CUSC checks need bipartite input and output dims");
  return {ch.in_dims()[0], ch.in_dims()[1], ch.out_dims()[0], ch.out_dims()[1]};
}

Matrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

}  // namespace

CheckResult is_conditionally_unital(const QuantumChannel& ch, double tol) {
  const auto d = bipartite_dims(ch);
  const Matrix j = choi(ch);
  const Dims jd{d.a, d.b, d.a2, d.b2};
  const Matrix j_bab = partial_trace(j, jd, {1, 2, 3});
  const Matrix j_bb = partial_trace(j, jd, {1, 3});
  const Matrix rhs = permute_subsystems(kron(j_bb, identity(d.a2) / static_cast<double>(d.a2)), {d.b, d.b2, d.a2},
                                        {0, 2, 1});
  const double v = max_abs(j_bab - rhs);
  return {v <= tol, v};
}

CheckResult is_semicausal(const QuantumChannel& ch, double tol) {
  const auto d = bipartite_dims(ch);
  const Matrix j = choi(ch);
  const Dims jd{d.a, d.b, d.a2, d.b2};
  const Matrix j_abb = partial_trace(j, jd, {0, 1, 3});
  const Matrix j_bb = partial_trace(j, jd, {1, 3});
  const double v = max_abs(j_abb - kron(identity(d.a) / static_cast<double>(d.a), j_bb));
  return {v <= tol, v};
}

CheckResult semicausal_operational(const QuantumChannel& ch, std::size_t trials, std::uint64_t seed, double tol) {
  const auto d = bipartite_dims(ch);
  Rng rng(seed);
  const Dims out{d.a2, d.b2};
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng sub = rng.split(t);
    const auto m = random_channel(d.a, d.a, 1 + sub.index(d.a * d.a), sub);
    const auto rho = random_density({d.a, d.b}, sub);
    const Matrix direct = partial_trace(ch.apply(rho.matrix()), out, {1});
    const Matrix local = partial_trace(ch.apply(apply_on(m, rho.matrix(), rho.dims(), 0)), out, {1});
    worst = std::max(worst, max_abs(direct - local));
  }
  return {worst <= tol, worst};
}

CuscVerdict is_cusc(const QuantumChannel& ch, double tol, std::size_t operational_trials, std::uint64_t seed) {
  const auto cu = is_conditionally_unital(ch, tol);
  const auto sc = is_semicausal(ch, tol);
  CuscVerdict v{cu.ok, sc.ok, std::nullopt, std::max(cu.violation, sc.violation), cu.violation, sc.violation,
                std::nullopt};
  if (operational_trials > 0) {
    const auto op = semicausal_operational(ch, operational_trials, seed, tol);
    v.semicausal_operational = op.ok;
    v.operational_violation = op.violation;
  }
  return v;
}

QuantumChannel cds_channel(const std::vector<RealMatrix>& ds, const std::vector<std::vector<Matrix>>& fs) {
  if (ds.empty() || ds.size() != fs.size()) throw DimensionError("need one CP map per doubly stochastic matrix");
  const auto m = ds[0].rows();
  Eigen::Index db = -1, db2 = -1;
  for (const auto& f : fs)
    for (const auto& k : f) {
      if (db < 0) {
        db = k.cols();
        db2 = k.rows();
      }
      if (k.cols() != db || k.rows() != db2) throw DimensionError("CP map Kraus operators must share one shape");
    }
  if (db < 0) throw DimensionError("CP maps need Kraus operators");
  Matrix sum = Matrix::Zero(db, db);
  for (const auto& f : fs)
    for (const auto& k : f) sum += k.adjoint() * k;
  if (max_abs(sum - Matrix::Identity(db, db)) > tol::reconstruction)
    throw DomainError("CP maps do not sum to a trace-preserving map");
  const auto n = static_cast<std::size_t>(m);
  std::vector<Matrix> kraus;
  for (std::size_t j = 0; j < ds.size(); ++j) {
    const RealMatrix& d = ds[j];
    if (d.rows() != m || d.cols() != m) throw DimensionError("doubly stochastic matrices must share one square shape");
    if (d.minCoeff() < -tol::structural || (d.rowwise().sum().array() - 1.0).abs().maxCoeff() > tol::structural ||
        (d.colwise().sum().array() - 1.0).abs().maxCoeff() > tol::structural)
      throw DomainError("matrix is not doubly stochastic");
    for (Eigen::Index xp = 0; xp < m; ++xp)
      for (Eigen::Index x = 0; x < m; ++x) {
        if (d(xp, x) <= 0.0) continue;
        const Matrix flip = std::sqrt(d(xp, x)) * ket(n, static_cast<std::size_t>(xp)) *
                            ket(n, static_cast<std::size_t>(x)).adjoint();
        for (const auto& k : fs[j]) kraus.push_back(kron(flip, k));
      }
  }
  return QuantumChannel({n, static_cast<std::size_t>(db)}, {n, static_cast<std::size_t>(db2)}, std::move(kraus));
}

QuantumChannel semicausal_from_parts(const QuantumChannel& f_iso, const QuantumChannel& e) {
  if (f_iso.kraus().size() != 1) throw DomainError("F must be an isometry channel");
  if (f_iso.out_dims().size() != 2 || e.in_dims().size() != 2)
    throw DimensionError("F must output [R, B'] and E must take [A, R]");
  const std::size_t r = f_iso.out_dims()[0], b2 = f_iso.out_dims()[1];
  if (e.in_dims()[1] != r) throw DimensionError("reference dimensions of F and E disagree");
  const std::size_t a = e.in_dims()[0], b = f_iso.in_dim();
  const auto first = tensor(identity_channel(a), f_iso).with_dims({a, b}, {a, r, b2});
  const auto second = tensor(e.with_dims({a * r}, {e.out_dim()}), identity_channel(b2));
  return compose(second, first.with_dims({a, b}, {a * r, b2})).with_dims({a, b}, {e.out_dim(), b2});
}

Vector bell_basis_vector(std::size_t d, std::size_t j) {
  if (j >= d * d) throw DimensionError("Bell index out of range");
  const std::size_t a = j / d, b = j % d;
  Matrix w = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const Matrix x = weyl_shift(d), z = weyl_clock(d);
  for (std::size_t i = 0; i < a; ++i) w = x * w;
  Matrix zb = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < b; ++i) zb = z * zb;
  w = w * zb;
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
  return kron(w, identity(d)) * phi;
}

QuantumChannel teleport_cusc(const DensityOperator& target) {
  if (target.dims().size() != 2 || target.dims()[0] != target.dims()[1])
    throw DimensionError("teleportation target must live on [d, d]");
  const std::size_t d = target.dims()[0], d2 = d * d;
  const auto n = static_cast<Eigen::Index>(d);
  const auto ts = eigh_desc(target.matrix());
  std::vector<Vector> bell;
  for (std::size_t k = 0; k < d2; ++k) bell.push_back(bell_basis_vector(d, k));

  // F: B → R ⊗ B'. Prepare |t_m⟩_{A'B'}, Bell-measure (A', B), write k to R.
  std::vector<Matrix> f_kraus;
  for (Eigen::Index m = 0; m < ts.values.size(); ++m) {
    if (ts.values(m) <= 1e-14) continue;
    const Vector& t = ts.vectors.col(m);
    Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d2) * n, n);
    for (std::size_t k = 0; k < d2; ++k)
      for (Eigen::Index bin = 0; bin < n; ++bin)
        for (Eigen::Index bout = 0; bout < n; ++bout) {
          // ⟨β_k|_{A'B} (|t⟩_{A'B'} ⊗ |bin⟩_B), component bout of B'.
          cplx amp = 0.0;
          for (Eigen::Index ap = 0; ap < n; ++ap) amp += std::conj(bell[k](ap * n + bin)) * t(ap * n + bout);
          v(static_cast<Eigen::Index>(k) * n + bout, bin) = amp;
        }
    f_kraus.push_back(std::sqrt(ts.values(m)) * v);
  }
  const QuantumChannel f({d}, {d2, d}, std::move(f_kraus));

  // E: A ⊗ R → A. Undo the outcome-dependent Weyl operator.
  std::vector<Matrix> e_kraus;
  for (std::size_t k = 0; k < d2; ++k) {
    Matrix mk(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < n; ++a) {
        // d·⟨β_k|_{A'B} (|i⟩_{A'} ⊗ |φ⁺⟩_{AB}), component a of A.
        cplx amp = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) amp += std::conj(bell[k](i * n + b)) * (a == b ? 1.0 : 0.0);
        mk(a, i) = amp * std::sqrt(static_cast<double>(d));
      }
    e_kraus.push_back(kron(mk.adjoint(), ket(d2, k).adjoint()));
  }
  const QuantumChannel e({d, d2}, {d}, std::move(e_kraus));

  const auto first = tensor(identity_channel(d), f).with_dims({d, d}, {d * d2, d});
  const auto second = tensor(e.with_dims({d * d2}, {d}), identity_channel(d));
  return compress(compose(second, first).with_dims({d, d}, {d, d}));
}

QuantumChannel bell_basis_scrambler(std::size_t d) {
  if (d < 2) throw DomainError("scrambler needs d >= 2");
  const std::size_t d2 = d * d;
  const auto n3 = static_cast<Eigen::Index>(d * d * d);
  Matrix j = Matrix::Zero(n3 * static_cast<Eigen::Index>(d2), n3 * static_cast<Eigen::Index>(d2));
  for (std::size_t k = 0; k < d2; ++k) {
    const Vector b = bell_basis_vector(d, k);
    // φ^(k)_{AB} ⊗ I_{A2} reordered to (A, A2, B).
    const Matrix in = permute_subsystems(kron(b * b.adjoint(), identity(d)), {d, d, d}, {0, 2, 1});
    j += kron(in, basis_projector(d2, k));
  }
  return from_choi(j, {d2, d}, {d2, 1});
}

QuantumChannel nonneg_witness_channel(const DensityOperator& rho) {
  if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1])
    throw DimensionError("witness construction needs a state on [d, d]");
  const std::size_t d = rho.dims()[0];
  const double dd = static_cast<double>(d);
  if (eig_desc(rho.matrix())(0) > 1.0 / dd + tol::structural)
    throw DomainError("largest eigenvalue exceeds 1/d");
  const Matrix rb = partial_trace(rho.matrix(), rho.dims(), {1});
  if (max_abs(rb - identity(d) / dd) > tol::reconstruction) throw DomainError("B marginal is not maximally mixed");
  const Matrix rho_ba = permute_subsystems(rho.matrix(), rho.dims(), {1, 0});
  Matrix j = kron(basis_projector(d, 0), dd * rho_ba);
  const Matrix rest = (identity(d * d) - dd * rho_ba) / (dd - 1.0);
  for (std::size_t x = 1; x < d; ++x) j += kron(basis_projector(d, x), rest);
  return from_choi(j, {d, d}, {d});
}

QuantumChannel nonneg_witness_composite(const DensityOperator& rho) {
  const std::size_t d = rho.dims()[0];
  const auto e = nonneg_witness_channel(rho);
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
  const QuantumChannel f({1}, {d, d}, {Matrix(phi)});
  return semicausal_from_parts(f, e);
}

Matrix householder_prep(const Vector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw DomainError("zero vector cannot be prepared");
  Vector t = psi / norm;
  const auto n = t.size();
  // Phase so that t(0) is real and nonnegative; the phase is restored at the end.
  cplx phase = 1.0;
  if (std::abs(t(0)) > 1e-15) phase = t(0) / std::abs(t(0));
  t /= phase;
  Vector v = Vector::Zero(n);
  v(0) = 1.0;
  v -= t;
  Matrix h = Matrix::Identity(n, n);
  const double vn = v.squaredNorm();
  if (vn > 1e-30) h -= 2.0 * v * v.adjoint() / vn;
  return phase * h;
}

QuantumChannel separable_prep_channel(const std::vector<SeparableTerm>& parts) {
  if (parts.empty()) throw DomainError("need at least one term");
  double total = 0.0;
  for (const auto& p : parts) {
    if (p.p < -1e-12) throw DomainError("weights must be nonnegative");
    total += p.p;
  }
  if (std::abs(total - 1.0) > tol::structural) throw DomainError("weights must sum to 1");
  const auto da = static_cast<std::size_t>(parts[0].psi.size()), db = static_cast<std::size_t>(parts[0].phi.size());
  std::vector<Matrix> kraus;
  for (const auto& p : parts) {
    if (static_cast<std::size_t>(p.psi.size()) != da || static_cast<std::size_t>(p.phi.size()) != db)
      throw DimensionError("all terms must share dimensions");
    if (std::abs(p.psi.norm() - 1.0) > tol::structural || std::abs(p.phi.norm() - 1.0) > tol::structural)
      throw DomainError("term states must be normalized");
    if (p.p <= 0.0) continue;
    kraus.push_back(std::sqrt(p.p) * kron(householder_prep(p.psi), householder_prep(p.phi)));
  }
  return QuantumChannel({da, db}, {da, db}, std::move(kraus));
}

Matrix embedding_isometry(std::size_t d_small, std::size_t d_large) {
  if (d_small > d_large) throw DimensionError("cannot embed into a smaller space");
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d_large), static_cast<Eigen::Index>(d_small));
  for (std::size_t i = 0; i < d_small; ++i) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

DensityOperator embed_subsystem(const DensityOperator& rho, std::size_t k, std::size_t d_large) {
  if (k >= rho.dims().size()) throw DimensionError("subsystem index out of range");
  const auto iso = isometry_channel(embedding_isometry(rho.dims()[k], d_large), {rho.dims()[k]}, {d_large});
  return apply_on(iso, rho, k);
}

QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t kraus_count, Rng& rng) {
  // A Stinespring isometry needs d_out · k ≥ d_in.
  kraus_count = std::max(kraus_count, (d_in + d_out - 1) / d_out);
  const Matrix v = haar_isometry(d_out * kraus_count, d_in, rng);
  std::vector<Matrix> kraus;
  const auto o = static_cast<Eigen::Index>(d_out);
  for (std::size_t k = 0; k < kraus_count; ++k) kraus.push_back(v.middleRows(static_cast<Eigen::Index>(k) * o, o));
  return QuantumChannel({d_in}, {d_out}, std::move(kraus));
}

namespace {

QuantumChannel random_unital_mixture(std::size_t d, Rng& rng) {
  const std::size_t terms = 1 + rng.index(3);
  const RealVector w = random_pmf(terms, rng);
  std::vector<double> ws;
  std::vector<QuantumChannel> us;
  for (std::size_t k = 0; k < terms; ++k) {
    ws.push_back(w(static_cast<Eigen::Index>(k)));
    us.push_back(unitary_channel(haar_unitary(d, rng)));
  }
  return mixture(ws, us);
}

QuantumChannel random_cusc_base(std::size_t da, std::size_t db, Rng& rng) {
  const std::size_t kinds = da == db ? 4 : 3;
  switch (rng.index(kinds)) {
    case 0: {
      const std::size_t terms = 1 + rng.index(3);
      std::vector<RealMatrix> ds;
      for (std::size_t j = 0; j < terms; ++j) ds.push_back(random_doubly_stochastic(da, 2, rng));
      const auto inst = random_channel(db, db, terms * 2, rng);
      std::vector<std::vector<Matrix>> fs(terms);
      for (std::size_t k = 0; k < inst.kraus().size(); ++k) fs[k % terms].push_back(inst.kraus()[k]);
      return cds_channel(ds, fs);
    }
    case 1: {
      std::vector<SeparableTerm> parts;
      const std::size_t terms = 1 + rng.index(3);
      const RealVector w = random_pmf(terms, rng);
      for (std::size_t j = 0; j < terms; ++j)
        parts.push_back({w(static_cast<Eigen::Index>(j)), random_pure(da, rng), random_pure(db, rng)});
      return separable_prep_channel(parts);
    }
    case 2:
      return tensor(random_unital_mixture(da, rng), random_channel(db, db, 1 + rng.index(db * db), rng));
    default:
      return teleport_cusc(random_density({da, db}, rng));
  }
}

}  // namespace

QuantumChannel random_cusc(std::size_t da, std::size_t db, Rng& rng) {
  auto ch = random_cusc_base(da, db, rng);
  if (rng.uniform() < 0.3) ch = compose(random_cusc_base(da, db, rng), ch);
  return ch;
}

}  // namespace qce
