#include "qce/state_games.hpp"

#include <algorithm>
#include <cmath>

#include "qce/cusc.hpp"
#include "qce/optimize.hpp"
#include "qce/parallel.hpp"

namespace qce {

namespace {

void require_bipartite(const DensityOperator& rho) {
  if (rho.dims().size() != 2) throw DimensionError("game states must be bipartite");
}

Matrix eigenbasis(const Matrix& h) { return eigh_desc(h).vectors; }

Matrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

struct SearchOutcome {
  double value;
  Matrix basis;
};

// Maximizes value(U) over unitaries U = U0·G(θ), starting from each base,
// stopping early once `ceiling` is reached. Bases [0, structured) are
// searched in order; the rest run in parallel with a deterministic reduce.
template <class Value>
SearchOutcome search_unitary(std::size_t d, const std::vector<Matrix>& bases, std::size_t structured, Value value,
                             double ceiling, std::size_t max_evals, std::size_t* used) {
  const auto np = givens_param_count(d);
  auto run = [&](const Matrix& u0) {
    auto obj = [&](const RealVector& th) { return -value(Matrix(u0 * givens_unitary(d, th))); };
    NelderMeadOptions nm;
    nm.max_evals = max_evals;
    nm.target = -ceiling + 1e-12;
    nm.max_restarts = 2;
    const auto res = nelder_mead(obj, RealVector::Zero(static_cast<Eigen::Index>(np)), nm);
    return SearchOutcome{-res.value, u0 * givens_unitary(d, res.x)};
  };
  SearchOutcome best{-1.0, bases.empty() ? identity(d) : bases[0]};
  std::size_t count = 0;
  for (std::size_t k = 0; k < structured && k < bases.size(); ++k) {
    ++count;
    const auto r = run(bases[k]);
    if (r.value > best.value) best = r;
    if (best.value >= ceiling - 1e-12) {
      if (used) *used = count;
      return best;
    }
  }
  const std::size_t rest = bases.size() > structured ? bases.size() - structured : 0;
  std::vector<SearchOutcome> results(rest, SearchOutcome{-1.0, Matrix()});
  parallel_for(rest, [&](std::size_t i) { results[i] = run(bases[structured + i]); });
  for (const auto& r : results)
    if (r.value > best.value) best = r;
  if (used) *used = count + rest;
  return best;
}

}  // namespace

double reward_given_bob(const DensityOperator& rho, const HostMatrix& t, const Matrix& bob_basis,
                        std::vector<std::size_t>* f) {
  require_bipartite(rho);
  const auto da = static_cast<Eigen::Index>(rho.dims()[0]), db = static_cast<Eigen::Index>(rho.dims()[1]);
  if (bob_basis.rows() != db || bob_basis.cols() != db) throw DimensionError("Bob basis does not match B");
  const Matrix& m = rho.matrix();
  if (f) f->assign(static_cast<std::size_t>(db), 0);
  double total = 0.0;
  Matrix cond(da, da);
  for (Eigen::Index z = 0; z < db; ++z) {
    const Vector v = bob_basis.col(z);
    // (I ⊗ ⟨v|) ρ (I ⊗ |v⟩)
    for (Eigen::Index a = 0; a < da; ++a)
      for (Eigen::Index b = 0; b < da; ++b)
        cond(a, b) = v.adjoint() * m.block(a * db, b * db, db, db) * v;
    std::size_t arg = 0;
    total += host_best_response(t, eig_desc(0.5 * (cond + cond.adjoint())), &arg);
    if (f) (*f)[static_cast<std::size_t>(z)] = arg;
  }
  return std::clamp(total, 0.0, 1.0);
}

RewardReport reward_noadv(const DensityOperator& rho, const HostMatrix& t, const StateGameOptions& opts) {
  require_bipartite(rho);
  const std::size_t db = rho.dims()[1];
  RewardReport rep;
  if (db == 1) {
    StateStrategy s{identity(1), {}};
    rep.value = reward_given_bob(rho, t, s.bob_basis, &s.f);
    rep.strategy = std::move(s);
    return rep;
  }
  std::vector<Matrix> bases{identity(db), eigenbasis(partial_trace(rho.matrix(), rho.dims(), {1})), fourier_matrix(db)};
  for (const auto& b : opts.extra_bob_bases)
    if (static_cast<std::size_t>(b.rows()) == db && b.cols() == b.rows()) bases.push_back(b);
  const std::size_t structured = bases.size();
  Rng rng(opts.seed);
  for (std::size_t k = 0; k < opts.restarts; ++k) {
    Rng sub = rng.split(k);
    bases.push_back(haar_unitary(db, sub));
  }
  const auto out = search_unitary(
      db, bases, structured, [&](const Matrix& u) { return reward_given_bob(rho, t, u); }, 1.0, opts.max_iters,
      &rep.restarts_used);
  StateStrategy s{out.basis, {}};
  rep.value = reward_given_bob(rho, t, s.bob_basis, &s.f);
  rep.strategy = std::move(s);
  return rep;
}

DensityOperator scramble(const DensityOperator& rho, const Matrix& basis, const Partition& partition) {
  require_bipartite(rho);
  const std::size_t da = rho.dims()[0], db = rho.dims()[1];
  if (static_cast<std::size_t>(basis.rows()) != da || basis.cols() != basis.rows())
    throw DimensionError("adversary basis does not match A");
  std::vector<bool> seen(da, false);
  std::size_t covered = 0;
  for (const auto& block : partition) {
    if (block.empty()) throw DomainError("partition blocks must be nonempty");
    for (auto i : block) {
      if (i >= da || seen[i]) throw DomainError("invalid partition of the basis");
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != da) throw DomainError("partition does not cover the basis");
  const auto n = static_cast<Eigen::Index>(da * db);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& block : partition) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
    for (auto i : block) p += projector(basis.col(static_cast<Eigen::Index>(i)));
    const Matrix full = kron(p, identity(db));
    out += full * rho.matrix() * full;
  }
  return DensityOperator(rho.dims(), out);
}

std::vector<Partition> set_partitions(std::size_t n) {
  std::vector<Partition> out;
  if (n == 0) return out;
  // Restricted growth strings a_0 = 0, a_i ≤ 1 + max(a_0..a_{i−1}).
  std::vector<std::size_t> a(n, 0);
  for (;;) {
    std::size_t blocks = 0;
    for (auto v : a) blocks = std::max(blocks, v + 1);
    Partition p(blocks);
    for (std::size_t i = 0; i < n; ++i) p[a[i]].push_back(i);
    out.push_back(std::move(p));
    std::size_t i = n;
    while (i-- > 1) {
      std::size_t mx = 0;
      for (std::size_t j = 0; j < i; ++j) mx = std::max(mx, a[j]);
      if (a[i] <= mx) {
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) a[j] = 0;
        break;
      }
    }
    if (i == 0) break;
  }
  return out;
}

double adversary_floor(const HostMatrix& t, std::size_t da) {
  RealVector flat = RealVector::Constant(static_cast<Eigen::Index>(da), 1.0 / static_cast<double>(da));
  return host_best_response(t, flat);
}

RewardReport reward_adv(const DensityOperator& rho, const HostMatrix& t, const StateGameOptions& opts) {
  require_bipartite(rho);
  const std::size_t da = rho.dims()[0], db = rho.dims()[1];
  if (da > 5) throw DomainError("adversary partition enumeration needs |A| <= 5");
  const auto partitions = set_partitions(da);
  const double floor = adversary_floor(t, da);

  StateGameOptions inner = opts;
  inner.restarts = opts.adversary_inner_restarts;

  RewardReport best;
  best.value = 2.0;
  best.certified = false;
  std::size_t runs = 0;
  auto evaluate = [&](const Matrix& basis, RewardReport* keep) {
    double worst = 2.0;
    for (const auto& part : partitions) {
      if (part.size() == 1) continue;  // the unscrambled value is computed once up front
      StateGameOptions o = inner;
      if (da == db) o.extra_bob_bases.push_back(basis.conjugate());
      const auto scrambled = scramble(rho, basis, part);
      auto r = reward_noadv(scrambled, t, o);
      ++runs;
      if (r.value < worst) {
        worst = r.value;
        if (keep && r.value < keep->value) {
          *keep = r;
          keep->adversary = AdversaryChoice{basis, part};
        }
      }
      if (worst <= floor + 1e-12) break;
    }
    return worst;
  };

  // The trivial partition (no scrambling) bounds the value from above.
  {
    RewardReport r = reward_noadv(rho, t, opts);
    r.adversary = AdversaryChoice{identity(da), Partition{[&] {
                                    std::vector<std::size_t> all(da);
                                    for (std::size_t i = 0; i < da; ++i) all[i] = i;
                                    return all;
                                  }()}};
    best = r;
    best.certified = false;
  }
  if (best.value <= floor + 1e-12 || da == 1) return best;

  const Matrix rho_a_basis = eigenbasis(partial_trace(rho.matrix(), rho.dims(), {0}));
  std::vector<Matrix> bases{identity(da), rho_a_basis, rho_a_basis * fourier_matrix(da)};
  Rng rng(opts.seed ^ 0xad5e7aULL);
  for (std::size_t k = 0; k < opts.adversary_restarts; ++k) {
    Rng sub = rng.split(k);
    bases.push_back(haar_unitary(da, sub));
  }
  Matrix best_basis = bases[0];
  double best_val = 2.0;
  for (const auto& b : bases) {
    RewardReport cand;
    cand.value = 2.0;
    const double v = evaluate(b, &cand);
    if (v < best_val) {
      best_val = v;
      best_basis = b;
    }
    if (cand.value < best.value) {
      best = cand;
      best.certified = false;
    }
    if (best.value <= floor + 1e-12) break;
  }
  if (best.value > floor + 1e-12 && opts.adversary_max_iters > 0) {
    const auto np = givens_param_count(da);
    auto obj = [&](const RealVector& th) { return evaluate(best_basis * givens_unitary(da, th), nullptr); };
    NelderMeadOptions nm;
    nm.max_evals = opts.adversary_max_iters;
    nm.target = floor + 1e-12;
    nm.max_restarts = 1;
    const auto res = nelder_mead(obj, RealVector::Zero(static_cast<Eigen::Index>(np)), nm);
    if (res.value < best.value) {
      RewardReport cand;
      cand.value = 2.0;
      evaluate(best_basis * givens_unitary(da, res.x), &cand);
      if (cand.value < best.value) best = cand;
    }
  }
  best.certified = false;
  best.restarts_used = runs;
  return best;
}

RewardReport reward(const DensityOperator& rho, const StateGameSpec& game, const StateGameOptions& opts) {
  const double p = game.p_adv;
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("adversary probability must lie in [0, 1]");
  if (p == 0.0) return reward_noadv(rho, game.t, opts);
  if (p == 1.0) return reward_adv(rho, game.t, opts);
  RewardReport none = reward_noadv(rho, game.t, opts);
  RewardReport adv = reward_adv(rho, game.t, opts);
  RewardReport out = adv;
  out.value = p * adv.value + (1.0 - p) * none.value;
  out.strategy = none.strategy;
  out.restarts_used = none.restarts_used + adv.restarts_used;
  out.certified = false;
  return out;
}

StateComparison compare_states(const DensityOperator& rho_in, const DensityOperator& sigma_in, const GameSampler& sampler,
                               const StateGameOptions& opts) {
  require_bipartite(rho_in);
  require_bipartite(sigma_in);
  const std::size_t da = std::max(rho_in.dims()[0], sigma_in.dims()[0]);
  const DensityOperator rho = rho_in.dims()[0] < da ? embed_subsystem(rho_in, 0, da) : rho_in;
  const DensityOperator sigma = sigma_in.dims()[0] < da ? embed_subsystem(sigma_in, 0, da) : sigma_in;
  const std::size_t nz = std::max(rho.dims()[1], sigma.dims()[1]);

  std::vector<StateGameSpec> games;
  if (sampler.fixed_w_games)
    for (double p : {0.0, 1.0})
      for (std::size_t w = 1; w <= da; ++w) games.push_back({HostMatrix::fixed(w, da), p});
  Rng rng(sampler.seed);
  for (std::size_t k = 0; k < sampler.n_games; ++k) {
    Rng sub = rng.split(k);
    auto t = random_host(da, nz, sub);
    games.push_back({std::move(t), sub.uniform() < 0.5 ? 0.0 : 1.0});
  }
  StateComparison out{true, std::nullopt, 0.0, 0.0, 0};
  double worst_gap = 2e-6;
  for (const auto& g : games) {
    ++out.games_checked;
    const double vr = reward(rho, g, opts).value;
    const double vs = reward(sigma, g, opts).value;
    if (vs - vr > worst_gap) {
      worst_gap = vs - vr;
      out.consistent = false;
      out.witness = g;
      out.rho_value = vr;
      out.sigma_value = vs;
    }
  }
  return out;
}

}  // namespace qce
