#include "qce/classical.hpp"

#include <algorithm>
#include <cmath>

#include "qce/entropy.hpp"
#include "qce/optimize.hpp"
#include "qce/random.hpp"
#include "qce/simplex.hpp"

namespace qce {

namespace {

RealVector sorted_desc(const RealVector& v) {
  RealVector s = v;
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

}  // namespace

ClassicalJoint::ClassicalJoint(RealMatrix p) : p_(std::move(p)) {
  if (p_.rows() == 0 || p_.cols() == 0) throw DimensionError("joint distribution needs nonempty alphabets");
  if (!p_.allFinite()) throw DomainError("joint distribution has non-finite entries");
  if (p_.minCoeff() < -1e-12) throw DomainError("joint distribution has negative entries");
  if (std::abs(p_.sum() - 1.0) > tol::structural) throw DomainError("joint distribution does not sum to 1");
  p_ = p_.cwiseMax(0.0);
}

ClassicalJoint ClassicalJoint::padded(std::size_t m) const {
  if (m < alice()) throw DimensionError("cannot pad to a smaller alphabet");
  RealMatrix q = RealMatrix::Zero(static_cast<Eigen::Index>(m), p_.cols());
  q.topRows(p_.rows()) = p_;
  return ClassicalJoint(q);
}

HostMatrix::HostMatrix(RealMatrix t, bool incomplete) : t_(std::move(t)) {
  if (t_.rows() == 0 || t_.cols() == 0) throw DimensionError("host matrix must be nonempty");
  if (!t_.allFinite()) throw DomainError("host matrix has non-finite entries");
  if (t_.minCoeff() < -1e-12 || t_.maxCoeff() > 1.0 + 1e-12) throw DomainError("host matrix entries must lie in [0, 1]");
  const RealVector sums = t_.colwise().sum().transpose();
  if (incomplete) {
    if (sums.maxCoeff() > 1.0 + tol::structural) throw DomainError("host matrix columns must sum to at most 1");
    complete_ = (sums.array() - 1.0).abs().maxCoeff() <= tol::structural;
  } else if ((sums.array() - 1.0).abs().maxCoeff() > tol::structural) {
    throw DomainError("host matrix columns must sum to 1");
  }
}

HostMatrix HostMatrix::fixed(std::size_t w, std::size_t n_w) {
  if (w < 1 || w > n_w) throw DomainError("guess budget out of range");
  RealMatrix t = RealMatrix::Zero(static_cast<Eigen::Index>(n_w), 1);
  t(static_cast<Eigen::Index>(w - 1), 0) = 1.0;
  return HostMatrix(t);
}

double host_best_response(const HostMatrix& t, const RealVector& desc, std::size_t* arg) {
  const auto& tm = t.t();
  RealVector prefix(tm.rows());
  for (Eigen::Index w = 0; w < tm.rows(); ++w) prefix(w) = prefix_sum(desc, static_cast<std::size_t>(w + 1));
  double best = -1.0;
  for (Eigen::Index z = 0; z < tm.cols(); ++z) {
    const double v = tm.col(z).dot(prefix);
    if (v > best) {
      best = v;
      if (arg) *arg = static_cast<std::size_t>(z);
    }
  }
  return best;
}

double prob_T(const ClassicalJoint& p, const HostMatrix& t) {
  double total = 0.0;
  for (Eigen::Index y = 0; y < p.p().cols(); ++y) total += host_best_response(t, sorted_desc(p.p().col(y)));
  return std::clamp(total, 0.0, 1.0);
}

double fixed_w_value(const ClassicalJoint& p, std::size_t w) {
  if (w < 1 || w > p.alice()) throw DomainError("guess budget out of range");
  double total = 0.0;
  for (Eigen::Index y = 0; y < p.p().cols(); ++y) total += prefix_sum(sorted_desc(p.p().col(y)), w);
  return std::clamp(total, 0.0, 1.0);
}

ClassicalVerdict cond_majorizes_classical(const ClassicalJoint& p_in, const ClassicalJoint& q_in,
                                          std::size_t falsify_trials, std::uint64_t seed) {
  const std::size_t m = std::max(p_in.alice(), q_in.alice());
  const ClassicalJoint p = p_in.padded(m), q = q_in.padded(m);
  const std::size_t n = p.bob(), n2 = q.bob();
  const auto M = static_cast<Eigen::Index>(m);

  // Variables: Z_{(y,w)} row-major m×m blocks, then t_{yw}.
  const std::size_t blocks = n * n2;
  const std::size_t zvars = blocks * m * m;
  const std::size_t nvars = zvars + blocks;
  auto zi = [&](std::size_t blk, std::size_t i, std::size_t j) {
    return static_cast<Eigen::Index>(blk * m * m + i * m + j);
  };
  auto ti = [&](std::size_t blk) { return static_cast<Eigen::Index>(zvars + blk); };
  const std::size_t rows = 2 * blocks * m + n + n2 * m;
  RealMatrix a = RealMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(nvars));
  RealVector b = RealVector::Zero(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    for (std::size_t i = 0; i < m; ++i, ++r) {
      for (std::size_t j = 0; j < m; ++j) a(r, zi(blk, i, j)) = 1.0;
      a(r, ti(blk)) = -1.0;
    }
    for (std::size_t j = 0; j < m; ++j, ++r) {
      for (std::size_t i = 0; i < m; ++i) a(r, zi(blk, i, j)) = 1.0;
      a(r, ti(blk)) = -1.0;
    }
  }
  for (std::size_t y = 0; y < n; ++y, ++r) {
    for (std::size_t w = 0; w < n2; ++w) a(r, ti(y * n2 + w)) = 1.0;
    b(r) = 1.0;
  }
  for (std::size_t w = 0; w < n2; ++w)
    for (std::size_t i = 0; i < m; ++i, ++r) {
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t j = 0; j < m; ++j)
          a(r, zi(y * n2 + w, i, j)) = p.p()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(y));
      b(r) = q.p()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(w));
    }

  const auto lp = lp_feasible(a, b, 1e-7);
  ClassicalVerdict v{lp.status == LpStatus::Feasible, lp.residual, lp.infeasibility, std::nullopt, std::nullopt, 0.0};
  if (v.majorizes) {
    CdsCertificate cert{RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n2)), {}};
    double worst = 0.0;
    RealMatrix recon = RealMatrix::Zero(M, static_cast<Eigen::Index>(n2));
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t w = 0; w < n2; ++w) {
        const std::size_t blk = y * n2 + w;
        const double t = lp.x(ti(blk));
        cert.t(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(w)) = t;
        RealMatrix d(M, M);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lp.x(zi(blk, i, j));
        recon.col(static_cast<Eigen::Index>(w)) += d * p.p().col(static_cast<Eigen::Index>(y));
        d = t > 1e-12 ? RealMatrix(d / t) : RealMatrix(RealMatrix::Constant(M, M, 1.0 / static_cast<double>(m)));
        cert.d.push_back(std::move(d));
      }
    worst = (recon - q.p()).cwiseAbs().maxCoeff();
    v.residual = std::max(v.residual, worst);
    v.certificate = std::move(cert);
    return v;
  }

  // Search for a game that Q wins more often than P.
  auto consider = [&](const HostMatrix& t) {
    const double gap = prob_T(q, t) - prob_T(p, t);
    if (gap > 1e-6 && gap > v.falsifier_gap) {
      v.falsifier = t;
      v.falsifier_gap = gap;
    }
  };
  for (std::size_t w = 1; w <= m; ++w) consider(HostMatrix::fixed(w, m));
  Rng rng(seed);
  const std::size_t nz = n + n2;
  for (std::size_t k = 0; k < falsify_trials; ++k) consider(random_host(m, nz, rng, k % 2 == 1));
  if (v.falsifier) return v;
  // Each column is a softmax over m budgets plus a no-guess outcome.
  auto host_of = [&](const RealVector& x) {
    RealMatrix t(M, static_cast<Eigen::Index>(nz));
    for (std::size_t z = 0; z < nz; ++z) {
      const RealVector logits = x.segment(static_cast<Eigen::Index>(z * (m + 1)), M + 1);
      const RealVector e = (logits.array() - logits.maxCoeff()).exp();
      t.col(static_cast<Eigen::Index>(z)) = e.head(M) / e.sum();
    }
    return HostMatrix(t, true);
  };
  NelderMeadOptions nm;
  nm.step = 1.0;
  nm.max_evals = 3000;
  for (std::size_t k = 0; k < 60 && !v.falsifier; ++k) {
    RealVector x0(static_cast<Eigen::Index>(nz * (m + 1)));
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = 3.0 * rng.normal();
    const auto res = nelder_mead([&](const RealVector& x) {
      const auto t = host_of(x);
      return prob_T(p, t) - prob_T(q, t);
    }, x0, nm);
    consider(host_of(res.x));
  }
  return v;
}

ClassicalJoint apply_cds_classical(const ClassicalJoint& p, const std::vector<RealMatrix>& e,
                                   const std::vector<RealMatrix>& r) {
  if (e.empty() || e.size() != r.size()) throw DimensionError("need matching E and R lists");
  const auto m = p.p().rows(), n = p.p().cols();
  const auto n2 = r[0].cols();
  RealMatrix rsum = RealMatrix::Zero(n, n2);
  RealMatrix q = RealMatrix::Zero(m, n2);
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j].rows() != m || e[j].cols() != m || r[j].rows() != n || r[j].cols() != n2)
      throw DimensionError("CDS data shapes do not match the joint distribution");
    if (e[j].minCoeff() < -1e-12 || (e[j].colwise().sum().array() - 1.0).abs().maxCoeff() > tol::structural)
      throw DomainError("E matrices must be column stochastic");
    if (r[j].minCoeff() < -1e-12) throw DomainError("R matrices must be nonnegative");
    rsum += r[j];
    q += e[j] * p.p() * r[j];
  }
  if ((rsum.rowwise().sum().array() - 1.0).abs().maxCoeff() > tol::structural)
    throw DomainError("R matrices must sum to a row-stochastic matrix");
  return ClassicalJoint(q);
}

DensityOperator embed_classical(const ClassicalJoint& p) {
  const auto m = p.p().rows(), n = p.p().cols();
  Matrix rho = Matrix::Zero(m * n, m * n);
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = 0; y < n; ++y) rho(x * n + y, x * n + y) = p.p()(x, y);
  return DensityOperator({p.alice(), p.bob()}, rho);
}

double shannon_cond_entropy(const ClassicalJoint& p) {
  const RealMatrix& pm = p.p();
  const RealVector joint = Eigen::Map<const RealVector>(pm.data(), pm.size());
  return shannon_entropy(joint) - shannon_entropy(p.bob_marginal());
}

ClassicalJoint random_joint(std::size_t m, std::size_t n, Rng& rng) {
  const RealVector flat = random_pmf(m * n, rng);
  return ClassicalJoint(Eigen::Map<const RealMatrix>(flat.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)));
}

HostMatrix random_host(std::size_t n_w, std::size_t n_z, Rng& rng, bool incomplete) {
  RealMatrix t = random_column_stochastic(n_w, n_z, rng);
  if (!incomplete) return HostMatrix(t);
  for (Eigen::Index z = 0; z < t.cols(); ++z) t.col(z) *= rng.uniform();
  return HostMatrix(t, true);
}

}  // namespace qce
