#include "qce/mc_sim.hpp"

#include <cmath>
#include <functional>

#include "qce/parallel.hpp"

namespace qce {

namespace {

SimResult run_blocks(std::uint64_t rounds, std::uint64_t seed, const std::function<bool(Rng&)>& round) {
  if (rounds == 0) throw DomainError("simulation needs at least one round");
  const std::uint64_t blocks = (rounds + sim_block_rounds - 1) / sim_block_rounds;
  std::vector<std::uint64_t> wins(blocks, 0);
  const Rng root(seed);
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    Rng rng = root.split(b);
    const std::uint64_t begin = b * sim_block_rounds;
    const std::uint64_t end = std::min(rounds, begin + sim_block_rounds);
    std::uint64_t w = 0;
    for (std::uint64_t r = begin; r < end; ++r) w += round(rng) ? 1 : 0;
    wins[b] = w;
  });
  SimResult out;
  for (auto w : wins) out.wins += w;
  out.rounds = rounds;
  out.seed = seed;
  out.win_rate = static_cast<double>(out.wins) / static_cast<double>(rounds);
  out.std_err = std::sqrt(out.win_rate * (1.0 - out.win_rate) / static_cast<double>(rounds));
  return out;
}

// Alice's outcome distribution (descending eigenbasis) of a conditional state.
RealVector alice_distribution(const Matrix& cond) {
  const auto es = eigh_desc(0.5 * (cond + cond.adjoint()));
  return outcome_distribution(cond, es.vectors);
}

struct Branch {
  RealVector bob;                 // P(z)
  std::vector<RealVector> alice;  // P(y | z), descending eigenbasis order
};

Matrix conditional(const Matrix& rho, std::size_t da, std::size_t db, const Vector& v) {
  const auto A = static_cast<Eigen::Index>(da), B = static_cast<Eigen::Index>(db);
  Matrix cond(A, A);
  for (Eigen::Index i = 0; i < A; ++i)
    for (Eigen::Index j = 0; j < A; ++j) cond(i, j) = v.adjoint() * rho.block(i * B, j * B, B, B) * v;
  return cond;
}

// Alice measures in `alice_bases[z]` when given, else in the eigenbasis of her
// own conditional state.
Branch make_branch(const Matrix& rho, std::size_t da, std::size_t db, const Matrix& bob_basis,
                   const std::vector<Matrix>* alice_bases = nullptr) {
  Branch b;
  b.bob = RealVector::Zero(static_cast<Eigen::Index>(db));
  const auto A = static_cast<Eigen::Index>(da), B = static_cast<Eigen::Index>(db);
  for (Eigen::Index z = 0; z < B; ++z) {
    const Matrix cond = conditional(rho, da, db, bob_basis.col(z));
    b.bob(z) = std::max(0.0, cond.trace().real());
    if (b.bob(z) <= 1e-15)
      b.alice.push_back(RealVector::Constant(A, 1.0 / static_cast<double>(da)));
    else if (alice_bases)
      b.alice.push_back(outcome_distribution(cond, (*alice_bases)[static_cast<std::size_t>(z)]));
    else
      b.alice.push_back(alice_distribution(cond));
  }
  return b;
}

}  // namespace

RealVector outcome_distribution(const Matrix& sigma, const Matrix& basis) {
  RealVector p(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    const Vector v = basis.col(k);
    p(k) = std::max(0.0, std::real(v.dot(sigma * v)));
  }
  return p;
}

SimResult simulate_state_game(const DensityOperator& rho, const StateGameSpec& game, const StateStrategy& strategy,
                              const std::optional<AdversaryChoice>& adversary, std::uint64_t rounds, std::uint64_t seed) {
  if (rho.dims().size() != 2) throw DimensionError("game states must be bipartite");
  const std::size_t da = rho.dims()[0], db = rho.dims()[1];
  if (strategy.f.size() != db) throw DimensionError("response map must cover every Bob outcome");
  for (auto zp : strategy.f)
    if (zp >= game.t.responses()) throw DomainError("response map points outside the host matrix");
  if (!(game.p_adv >= 0.0 && game.p_adv <= 1.0)) throw DomainError("adversary probability must lie in [0, 1]");
  if (game.p_adv > 0.0 && !adversary) throw DomainError("adversarial game needs an adversary choice");

  const Branch clean = make_branch(rho.matrix(), da, db, strategy.bob_basis);
  std::vector<Branch> scrambled;
  RealVector adv_probs;
  if (adversary) {
    // The players do not see the adversary's outcome, so Alice measures in the
    // eigenbasis of her conditional state in the scrambled mixture.
    const auto& part = adversary->partition;
    const auto n = static_cast<Eigen::Index>(db);
    std::vector<Matrix> blocks;
    Matrix mixture = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const auto& block : part) {
      Matrix p = Matrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
      for (auto i : block) p += projector(adversary->basis.col(static_cast<Eigen::Index>(i)));
      const Matrix full = kron(p, Matrix::Identity(n, n));
      blocks.push_back(full * rho.matrix() * full);
      mixture += blocks.back();
    }
    std::vector<Matrix> bases;
    for (Eigen::Index z = 0; z < n; ++z) {
      const Matrix cond = conditional(mixture, da, db, strategy.bob_basis.col(z));
      bases.push_back(eigh_desc(0.5 * (cond + cond.adjoint())).vectors);
    }
    adv_probs = RealVector::Zero(static_cast<Eigen::Index>(part.size()));
    for (std::size_t j = 0; j < part.size(); ++j) {
      Matrix post = blocks[j];
      const double q = std::max(0.0, post.trace().real());
      adv_probs(static_cast<Eigen::Index>(j)) = q;
      if (q > 1e-15) post /= q;
      scrambled.push_back(make_branch(post, da, db, strategy.bob_basis, &bases));
    }
  }
  // Budget distributions per response; a final slot holds the no-guess mass
  // of an incomplete host matrix.
  const RealMatrix& t = game.t.t();
  std::vector<RealVector> budgets;
  for (Eigen::Index zp = 0; zp < t.cols(); ++zp) {
    RealVector col(t.rows() + 1);
    col.head(t.rows()) = t.col(zp);
    col(t.rows()) = std::max(0.0, 1.0 - t.col(zp).sum());
    budgets.push_back(col);
  }
  const std::size_t no_guess = static_cast<std::size_t>(t.rows());
  return run_blocks(rounds, seed, [&](Rng& rng) {
    const Branch* br = &clean;
    if (adversary && rng.uniform() < game.p_adv) br = &scrambled[rng.categorical(adv_probs)];
    const std::size_t z = rng.categorical(br->bob);
    const std::size_t slot = rng.categorical(budgets[strategy.f[z]]);
    const std::size_t y = 1 + rng.categorical(br->alice[z]);
    return slot != no_guess && y <= slot + 1;
  });
}

SimResult simulate_channel_game(const QuantumChannel& n, const QuantumChannel& e, const ChannelGameSpec& game,
                                std::uint64_t rounds, std::uint64_t seed) {
  const auto ne = compose(n, e);
  const auto& entries = game.entries();
  RealVector px(static_cast<Eigen::Index>(entries.size()));
  std::vector<RealVector> ys;
  for (std::size_t x = 0; x < entries.size(); ++x) {
    px(static_cast<Eigen::Index>(x)) = entries[x].p;
    const Matrix out = apply_on(ne, entries[x].state.matrix(), entries[x].state.dims(), 0);
    ys.push_back(alice_distribution(out));
  }
  return run_blocks(rounds, seed, [&](Rng& rng) {
    const std::size_t x = 1 + rng.categorical(px);
    const std::size_t y = 1 + rng.categorical(ys[x - 1]);
    return y <= x;
  });
}

}  // namespace qce
