#include "qce/channel_games.hpp"

#include <algorithm>
#include <cmath>

#include "qce/cusc.hpp"
#include "qce/optimize.hpp"
#include "qce/parallel.hpp"

namespace qce {

namespace {

RealVector padded(const RealVector& p, std::size_t n) {
  if (static_cast<std::size_t>(p.size()) > n) throw DomainError("PMF is longer than the game alphabet");
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(n));
  out.head(p.size()) = p;
  if (out.minCoeff() < -1e-12 || std::abs(out.sum() - 1.0) > tol::structural) throw DomainError("invalid PMF");
  return out;
}

Matrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

// Distinct states of a game, with each entry's index into them.
struct GameCache {
  std::vector<const Matrix*> states;
  std::vector<std::size_t> of_entry;
};

GameCache group_states(const ChannelGameSpec& game) {
  GameCache c;
  for (const auto& e : game.entries()) {
    std::size_t found = c.states.size();
    for (std::size_t k = 0; k < c.states.size(); ++k)
      if (max_abs(*c.states[k] - e.state.matrix()) == 0.0) {
        found = k;
        break;
      }
    if (found == c.states.size()) c.states.push_back(&e.state.matrix());
    c.of_entry.push_back(found);
  }
  return c;
}

// Reward of the combined Kraus list K (N's output ← A).
double reward_of_kraus(const std::vector<Matrix>& kraus, const ChannelGameSpec& game, const GameCache& cache) {
  const std::size_t db = game.dim_b();
  const Matrix ib = identity(db);
  std::vector<Matrix> full;
  full.reserve(kraus.size());
  for (const auto& k : kraus) full.push_back(kron(k, ib));
  std::vector<RealVector> spectra;
  for (const Matrix* s : cache.states) {
    const auto n = full[0].rows();
    Matrix out = Matrix::Zero(n, n);
    for (const auto& k : full) out.noalias() += k * (*s) * k.adjoint();
    spectra.push_back(eig_desc(0.5 * (out + out.adjoint())));
  }
  double total = 0.0;
  const auto& entries = game.entries();
  for (std::size_t x = 0; x < entries.size(); ++x)
    if (entries[x].p > 0.0) total += entries[x].p * prefix_sum(spectra[cache.of_entry[x]], x + 1);
  return std::clamp(total, 0.0, 1.0);
}

std::vector<Matrix> composed_kraus(const QuantumChannel& n, const std::vector<Matrix>& e) {
  std::vector<Matrix> out;
  out.reserve(n.kraus().size() * e.size());
  for (const auto& a : n.kraus())
    for (const auto& b : e) out.push_back(a * b);
  return out;
}

// Stinespring isometry rows o·env + k hold Kraus operator k.
Matrix kraus_to_isometry(const std::vector<Matrix>& kraus, std::size_t env) {
  const auto dout = kraus[0].rows(), din = kraus[0].cols();
  const auto E = static_cast<Eigen::Index>(env);
  Matrix v = Matrix::Zero(dout * E, din);
  for (std::size_t k = 0; k < kraus.size(); ++k)
    for (Eigen::Index o = 0; o < dout; ++o) v.row(o * E + static_cast<Eigen::Index>(k)) = kraus[k].row(o);
  return v;
}

std::vector<Matrix> isometry_to_kraus(const Matrix& v, std::size_t env) {
  const auto E = static_cast<Eigen::Index>(env);
  const auto dout = v.rows() / E;
  std::vector<Matrix> kraus(env, Matrix(dout, v.cols()));
  for (std::size_t k = 0; k < env; ++k)
    for (Eigen::Index o = 0; o < dout; ++o) kraus[k].row(o) = v.row(o * E + static_cast<Eigen::Index>(k));
  return kraus;
}

// Kraus list of "measure in `meas` basis, prepare column i of `prep`".
std::vector<Matrix> measure_prepare(const Matrix& meas, const Matrix& prep) {
  std::vector<Matrix> out;
  const auto n = std::min(meas.cols(), prep.cols());
  for (Eigen::Index i = 0; i < meas.cols(); ++i) out.push_back(prep.col(i % n) * meas.col(i).adjoint());
  return out;
}

std::vector<Matrix> prepare(const Vector& tau, std::size_t da) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < da; ++i) out.push_back(tau * ket(da, i).adjoint());
  return out;
}

}  // namespace

ChannelGameSpec::ChannelGameSpec(std::vector<ChannelGameEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DomainError("game needs at least one entry");
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.p < -1e-12) throw DomainError("game weights must be nonnegative");
    if (e.state.dims().size() != 2) throw DimensionError("game states must be bipartite");
    if (e.state.dims() != entries_[0].state.dims()) throw DimensionError("game states must share dims");
    total += e.p;
  }
  if (std::abs(total - 1.0) > tol::structural) throw DomainError("game weights must sum to 1");
}

ChannelGameSpec bell_game(const RealVector& p) {
  const RealVector q = padded(p, 4);
  std::vector<ChannelGameEntry> e;
  for (Eigen::Index x = 0; x < 4; ++x) e.push_back({q(x), phi_plus(2)});
  return ChannelGameSpec(std::move(e));
}

ChannelGameSpec zero_game(const RealVector& p) {
  const RealVector q = padded(p, 2);
  std::vector<ChannelGameEntry> e;
  for (Eigen::Index x = 0; x < 2; ++x) e.push_back({q(x), DensityOperator({2, 1}, basis_projector(2, 0))});
  return ChannelGameSpec(std::move(e));
}

ChannelGameSpec table_game(GameKind kind, const RealVector& p) { return kind == GameKind::Bell ? bell_game(p) : zero_game(p); }

double channel_reward_fixed(const QuantumChannel& n, const QuantumChannel& e, const ChannelGameSpec& game) {
  if (e.in_dim() != game.dim_a()) throw DimensionError("preprocessing input does not match the game's A");
  if (e.out_dim() != n.in_dim()) throw DimensionError("preprocessing output does not match the channel input");
  return reward_of_kraus(composed_kraus(n, e.kraus()), game, group_states(game));
}

RewardReport channel_reward(const QuantumChannel& n, const ChannelGameSpec& game, const ChannelGameOptions& opts) {
  const std::size_t da = game.dim_a(), din = n.in_dim();
  const std::size_t env = opts.kraus_rank == 0 ? da * da : opts.kraus_rank;
  const auto cache = group_states(game);
  auto value_of = [&](const std::vector<Matrix>& e) { return reward_of_kraus(composed_kraus(n, e), game, cache); };

  // Structured candidates.
  std::vector<std::vector<Matrix>> cands;
  if (da <= din) cands.push_back({embedding_isometry(da, din)});
  for (std::size_t i = 0; i < din; ++i) cands.push_back(prepare(ket(din, i), da));
  const Matrix f = fourier_matrix(din);
  for (Eigen::Index i = 0; i < f.cols(); ++i) cands.push_back(prepare(f.col(i), da));
  if (da == din) {
    for (const Matrix* s : cache.states) {
      const Matrix ra = partial_trace(*s, {da, game.dim_b()}, {0});
      const Matrix vecs = eigh_desc(ra).vectors;
      for (Eigen::Index i = 0; i < vecs.cols(); ++i) cands.push_back(prepare(vecs.col(i), da));
    }
  }
  cands.push_back(measure_prepare(identity(da), identity(din)));
  cands.push_back(measure_prepare(fourier_matrix(da), fourier_matrix(din)));
  for (const auto& tau : opts.extra_replacements) {
    if (tau.dim() != din) throw DimensionError("replacement state does not match the channel input");
    const auto es = eigh_desc(tau.matrix());
    std::vector<Matrix> k;
    for (Eigen::Index j = 0; j < es.values.size(); ++j)
      if (es.values(j) > 1e-14)
        for (std::size_t i = 0; i < da; ++i) k.push_back(std::sqrt(es.values(j)) * es.vectors.col(j) * ket(da, i).adjoint());
    cands.push_back(std::move(k));
  }
  for (const auto& e : opts.extra_preprocessings) {
    if (e.in_dim() != da || e.out_dim() != din) throw DimensionError("extra preprocessing has the wrong shape");
    cands.push_back(e.kraus());
  }

  RewardReport rep;
  std::vector<std::pair<double, std::size_t>> scored;
  std::vector<Matrix> best_kraus;
  double best = -1.0;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const double v = value_of(cands[c]);
    scored.emplace_back(v, c);
    if (v > best) {
      best = v;
      best_kraus = cands[c];
    }
  }
  rep.restarts_used = cands.size();
  auto finish = [&]() {
    rep.value = best;
    rep.preprocessing = QuantumChannel({da}, {din}, best_kraus);
    return rep;
  };
  if (best >= 1.0 - 1e-12) return finish();

  // Local search over isometries C^{da} → C^{din·env}.
  auto polish = [&](const Matrix& v0) {
    auto obj = [&](const RealVector& th) { return -value_of(isometry_to_kraus(polar_isometry(v0, th), env)); };
    NelderMeadOptions nm;
    nm.max_evals = opts.max_iters;
    nm.step = 0.2;
    nm.target = -1.0 + 1e-12;
    nm.max_restarts = 3;
    const auto res = nelder_mead(obj, RealVector::Zero(static_cast<Eigen::Index>(polar_param_count(v0.rows(), v0.cols()))), nm);
    return std::make_pair(-res.value, polar_isometry(v0, res.x));
  };
  std::vector<Matrix> starts;
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; k < scored.size() && starts.size() < opts.polish; ++k) {
    const auto& kr = cands[scored[k].second];
    if (kr.size() <= env) starts.push_back(kraus_to_isometry(kr, env));
  }
  Rng rng(opts.seed);
  for (std::size_t k = 0; k < opts.restarts; ++k) {
    Rng sub = rng.split(k);
    starts.push_back(haar_isometry(din * env, da, sub));
  }
  std::vector<std::pair<double, Matrix>> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { results[i] = polish(starts[i]); });
  for (const auto& r : results)
    if (r.first > best) {
      best = r.first;
      best_kraus = isometry_to_kraus(r.second, env);
    }
  rep.restarts_used += starts.size();
  return finish();
}

double analytic_reward(ZooKind kind, double gamma, GameKind game, const RealVector& p_in) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("noise parameter must lie in [0, 1]");
  const RealVector p = padded(p_in, game == GameKind::Bell ? 4 : 2);
  const double p1 = p(0);
  const bool bell = game == GameKind::Bell;
  switch (kind) {
    case ZooKind::Unitary: return 1.0;
    case ZooKind::ClassicalIdentity: return bell ? 1.0 - p1 / 2.0 : 1.0;
    case ZooKind::Depolarizing: {
      if (!bell) return 1.0 - gamma * p1 / 2.0;
      double mean = 0.0;
      for (Eigen::Index x = 0; x < p.size(); ++x) mean += static_cast<double>(x + 1) * p(x);
      return (1.0 - gamma) + gamma * mean / 4.0;
    }
    case ZooKind::Povm: return bell ? 1.0 - p1 / 2.0 : 1.0;
    case ZooKind::AmplitudeDamping: return bell ? 1.0 - p1 * gamma / 2.0 : 1.0;
    case ZooKind::Replacement: {
      const Matrix sigma = zoo_replacement_state(gamma).matrix();
      const RealVector spec = eig_desc(bell ? Matrix(kron(sigma, identity(2) / 2.0)) : sigma);
      double total = 0.0;
      for (Eigen::Index x = 0; x < p.size(); ++x) total += p(x) * prefix_sum(spec, static_cast<std::size_t>(x + 1));
      return total;
    }
    case ZooKind::Dephasing: return bell ? 1.0 - gamma * p1 / 2.0 : 1.0;
  }
  throw DomainError("unknown channel kind");
}

double printed_amplitude_damping_bell(double gamma, const RealVector& p) {
  const RealVector q = padded(p, 4);
  return (1.0 - gamma / 2.0) * q(0) + gamma / 2.0;
}

QuantumChannel degrade(const QuantumChannel& n, const std::vector<DegradePart>& parts) {
  if (parts.empty()) throw DomainError("degradation needs at least one part");
  std::vector<double> w;
  std::vector<QuantumChannel> chans;
  for (const auto& part : parts) {
    if (part.v.rows() < part.v.cols() || static_cast<std::size_t>(part.v.cols()) != n.out_dim())
      throw DimensionError("isometry does not act on the channel output");
    if (max_abs(part.v.adjoint() * part.v - identity(n.out_dim())) > tol::reconstruction)
      throw DomainError("V is not an isometry");
    const auto v = isometry_channel(part.v, {n.out_dim()}, {static_cast<std::size_t>(part.v.rows())});
    w.push_back(part.p);
    chans.push_back(compose(v, compose(n, part.e)));
  }
  return compress(mixture(w, chans));
}

std::vector<ChannelGameSpec> sample_channel_games(const QuantumChannel& n, const QuantumChannel& m,
                                                  const ChannelSampler& sampler) {
  const std::size_t bound = sampler.max_dim != 0
                                ? sampler.max_dim
                                : std::max({n.in_dim(), n.out_dim(), m.in_dim(), m.out_dim()});
  const std::size_t xmax = std::max(2 * bound, bound * std::min(n.out_dim(), m.out_dim()));
  std::vector<ChannelGameSpec> games;
  if (sampler.fixed_w_games) {
    const std::size_t wmax = std::max(n.out_dim(), m.out_dim());
    for (std::size_t w = 1; w <= wmax; ++w) {
      std::vector<ChannelGameEntry> e;
      for (std::size_t x = 1; x <= w; ++x) e.push_back({x == w ? 1.0 : 0.0, DensityOperator({1, 1}, identity(1))});
      games.emplace_back(std::move(e));
    }
  }
  Rng rng(sampler.seed);
  for (std::size_t g = 0; g < sampler.n_games; ++g) {
    Rng sub = rng.split(g);
    const std::size_t da = 1 + sub.index(bound), db = 1 + sub.index(bound);
    const std::size_t nx = 1 + sub.index(std::min<std::size_t>(xmax, 4));
    const RealVector p = random_pmf(nx, sub);
    std::vector<ChannelGameEntry> e;
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t rank = 1 + sub.index(da * db);
      e.push_back({p(static_cast<Eigen::Index>(x)), random_density({da, db}, rank, sub)});
    }
    games.emplace_back(std::move(e));
  }
  return games;
}

ChannelComparison compare_channels(const QuantumChannel& n, const QuantumChannel& m, const ChannelSampler& sampler,
                                   const ChannelGameOptions& opts) {
  ChannelComparison out{true, std::nullopt, 0.0, 0.0, -1.0, 0};
  for (const auto& g : sample_channel_games(n, m, sampler)) {
    ++out.games_checked;
    const auto rm = channel_reward(m, g, opts);
    // Seed N's search with M's best preprocessing when the shapes allow.
    ChannelGameOptions on = opts;
    if (rm.preprocessing && rm.preprocessing->out_dim() == n.in_dim()) on.extra_preprocessings.push_back(*rm.preprocessing);
    const auto rn = channel_reward(n, g, on);
    const double gap = rm.value - rn.value;
    if (gap > out.max_gap) out.max_gap = gap;
    if (gap > 2e-6 && (!out.witness || gap > out.m_value - out.n_value)) {
      out.consistent = false;
      out.witness = g;
      out.n_value = rn.value;
      out.m_value = rm.value;
    }
  }
  return out;
}

PurityResult max_output_purity(const QuantumChannel& n, const ChannelGameOptions& opts) {
  const std::size_t d = n.in_dim();
  auto purity = [&](const Vector& psi) {
    const Matrix out = n.apply(Matrix(psi * psi.adjoint()));
    return std::real((out * out).trace());
  };
  std::vector<Vector> starts;
  for (std::size_t i = 0; i < d; ++i) starts.push_back(ket(d, i));
  const Matrix f = fourier_matrix(d);
  for (Eigen::Index i = 0; i < f.cols(); ++i) starts.push_back(f.col(i));
  Rng rng(opts.seed);
  for (std::size_t k = 0; k < opts.restarts; ++k) {
    Rng sub = rng.split(k);
    starts.push_back(random_pure(d, sub));
  }
  std::vector<PurityResult> results(starts.size(), PurityResult{-1.0, Vector()});
  parallel_for(starts.size(), [&](std::size_t i) {
    const Matrix v0 = starts[i];
    auto obj = [&](const RealVector& th) { return -purity(polar_isometry(v0, th).col(0)); };
    NelderMeadOptions nm;
    nm.max_evals = opts.max_iters;
    nm.step = 0.2;
    nm.target = -1.0 + 1e-12;
    const auto res = nelder_mead(obj, RealVector::Zero(static_cast<Eigen::Index>(2 * d)), nm);
    results[i] = {-res.value, polar_isometry(v0, res.x).col(0)};
  });
  PurityResult best{-1.0, Vector()};
  for (const auto& r : results)
    if (r.value > best.value) best = r;
  return best;
}

PurityGame purity_game(const QuantumChannel& m, const DensityOperator& rho_star) {
  if (rho_star.dim() != m.in_dim()) throw DimensionError("ρ* does not match the channel input");
  const RealVector lam = eig_desc(m.apply(rho_star.matrix())).cwiseMax(0.0);
  const double alpha = 1.0 / lam(0);
  const std::size_t l = static_cast<std::size_t>(lam.size()), da = m.in_dim();
  std::vector<ChannelGameEntry> e;
  double total = 0.0;
  std::vector<double> ps(l);
  for (std::size_t j = 0; j < l; ++j) {
    const double next = j + 1 < l ? lam(static_cast<Eigen::Index>(j + 1)) : 0.0;
    ps[j] = alpha * (lam(static_cast<Eigen::Index>(j)) - next);
    total += ps[j];
  }
  for (std::size_t j = 0; j < l; ++j) e.push_back({ps[j] / total, DensityOperator({da, 1}, basis_projector(da, 0))});
  return {ChannelGameSpec(std::move(e)), alpha};
}

}  // namespace qce
