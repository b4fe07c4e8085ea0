#include <doctest.h>

#include <cmath>

#include "qce/channel_games.hpp"
#include "qce/cusc.hpp"
#include "qce/random.hpp"

using namespace qce;

namespace {

RealVector pmf(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

ChannelGameOptions quick(std::uint64_t seed = 0) {
  ChannelGameOptions o;
  o.restarts = 6;
  o.seed = seed;
  o.max_iters = 600;
  return o;
}

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// Sum of the x largest eigenvalues, computed from a fresh decomposition.
double kyfan_oracle(const Matrix& m, std::size_t x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const RealVector ev = es.eigenvalues();
  double s = 0.0;
  for (std::size_t k = 0; k < x && k < static_cast<std::size_t>(ev.size()); ++k) s += ev(ev.size() - 1 - static_cast<Eigen::Index>(k));
  return s;
}

}  // namespace

TEST_CASE("game specs validate") {
  CHECK(bell_game(pmf({0.5, 0.5})).entries().size() == 4);
  CHECK(zero_game(pmf({1.0})).entries().size() == 2);
  CHECK(bell_game(pmf({1, 0, 0, 0})).dim_b() == 2);
  CHECK(zero_game(pmf({1, 0})).dim_b() == 1);
  CHECK_THROWS_AS(bell_game(pmf({0.5, 0.4})), DomainError);
  CHECK_THROWS_AS(ChannelGameSpec({}), DomainError);
  CHECK_THROWS_AS(ChannelGameSpec({{0.5, phi_plus(2)}, {0.5, maximally_mixed({3})}}), DimensionError);
}

TEST_CASE("fixed preprocessing rewards") {
  Rng rng(1);
  const auto id = identity_channel(2);
  for (int k = 0; k < 5; ++k) {
    const RealVector p = random_pmf(4, rng);
    REQUIRE(channel_reward_fixed(unitary_channel(haar_unitary(2, rng)), id, bell_game(p)) == doctest::Approx(1.0));
    const double g = rng.uniform();
    double expect = 1 - g;
    for (int x = 0; x < 4; ++x) expect += g * (x + 1) * p(x) / 4.0;
    REQUIRE(channel_reward_fixed(depolarizing(g), id, bell_game(p)) == doctest::Approx(expect));
    const auto sigma = random_density({2}, rng);
    const RealVector q = random_pmf(2, rng);
    const double sv = q(0) * kyfan_oracle(sigma.matrix(), 1) + q(1);
    REQUIRE(channel_reward_fixed(replacement(sigma, 2), random_channel(2, 2, 2, rng), zero_game(q)) == doctest::Approx(sv));
  }
  CHECK_THROWS_AS(channel_reward_fixed(identity_channel(3), id, bell_game(pmf({1, 0, 0, 0}))), DimensionError);
}

TEST_CASE("shifting game mass to larger budgets never lowers the reward") {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const auto n = random_channel(2, 2, 2, rng), e = random_channel(2, 2, 2, rng);
    RealVector p = random_pmf(4, rng);
    const double before = channel_reward_fixed(n, e, bell_game(p));
    const auto i = static_cast<Eigen::Index>(rng.index(3));
    const double move = rng.uniform() * p(i);
    p(i) -= move;
    p(i + 1) += move;
    REQUIRE(channel_reward_fixed(n, e, bell_game(p)) >= before - 1e-12);
  }
}

TEST_CASE("analytic table examples") {
  CHECK(analytic_reward(ZooKind::Depolarizing, 0.4, GameKind::Bell, pmf({1, 0, 0, 0})) == doctest::Approx(0.7));
  const RealVector p = pmf({0.4, 0.3, 0.2, 0.1});
  CHECK(analytic_reward(ZooKind::ClassicalIdentity, 0.0, GameKind::Bell, p) == doctest::Approx(0.8));
  CHECK(analytic_reward(ZooKind::AmplitudeDamping, 1.0, GameKind::Bell, pmf({1, 0, 0, 0})) == doctest::Approx(0.5));
  CHECK(analytic_reward(ZooKind::AmplitudeDamping, 0.6, GameKind::Bell, p) == doctest::Approx(1 - 0.4 * 0.3));
  CHECK(printed_amplitude_damping_bell(0.6, p) == doctest::Approx(0.7 * 0.4 + 0.3));
  CHECK(analytic_reward(ZooKind::Unitary, 0.3, GameKind::Zero, pmf({0.2, 0.8})) == 1.0);
  CHECK_THROWS_AS(analytic_reward(ZooKind::Depolarizing, 1.5, GameKind::Bell, p), DomainError);
}

TEST_CASE("analytic table matches fixed-preprocessing oracles") {
  // Independent check of each closed form at its known optimal preprocessing.
  Rng rng(3);
  const double g = 0.3;
  const RealVector p = random_pmf(4, rng), q = random_pmf(2, rng);
  const auto id = identity_channel(2);
  const auto zero_rep = replacement(pure_state({2}, ket(2, 0)), 2);
  // Spectrum of (A_γ ⊗ id)(φ⁺) is {1−γ/2, γ/2, 0, 0}.
  const RealVector spec = eig_desc(tensor(amplitude_damping(g), id).apply(phi_plus(2)).matrix());
  CHECK(spec(0) == doctest::Approx(1 - g / 2));
  CHECK(spec(1) == doctest::Approx(g / 2));
  CHECK(channel_reward_fixed(amplitude_damping(g), id, bell_game(p)) ==
        doctest::Approx(analytic_reward(ZooKind::AmplitudeDamping, g, GameKind::Bell, p)));
  CHECK(channel_reward_fixed(classical_identity(), zero_rep, bell_game(p)) ==
        doctest::Approx(analytic_reward(ZooKind::ClassicalIdentity, g, GameKind::Bell, p)));
  CHECK(channel_reward_fixed(make_zoo(ZooKind::Dephasing, g), id, bell_game(p)) ==
        doctest::Approx(analytic_reward(ZooKind::Dephasing, g, GameKind::Bell, p)));
  CHECK(channel_reward_fixed(depolarizing(g), id, zero_game(q)) ==
        doctest::Approx(analytic_reward(ZooKind::Depolarizing, g, GameKind::Zero, q)));
  CHECK(channel_reward_fixed(make_zoo(ZooKind::Replacement, g), id, bell_game(p)) ==
        doctest::Approx(analytic_reward(ZooKind::Replacement, g, GameKind::Bell, p)));
  CHECK(channel_reward_fixed(unitary_channel(hadamard()), id, bell_game(p)) == doctest::Approx(1.0));
}

TEST_CASE("optimized channel rewards") {
  Rng rng(4);
  const RealVector q = random_pmf(2, rng), p = random_pmf(4, rng);
  const auto r = channel_reward(amplitude_damping(0.7), zero_game(q), quick());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(r.preprocessing.has_value());
  CHECK(channel_reward_fixed(amplitude_damping(0.7), *r.preprocessing, zero_game(q)) == doctest::Approx(r.value).epsilon(1e-9));
  CHECK(std::abs(channel_reward(make_zoo(ZooKind::Povm, 0.0), bell_game(p), quick()).value - (1 - p(0) / 2)) < 1e-3);
  const double g = 0.7;
  CHECK(std::abs(channel_reward(make_zoo(ZooKind::Dephasing, g), bell_game(p), quick()).value - (1 - g * p(0) / 2)) < 1e-3);
}

TEST_CASE("degradation") {
  Rng rng(5);
  const auto n = depolarizing(0.3);
  const auto same = degrade(n, {{1.0, Matrix::Identity(2, 2), identity_channel(2)}});
  CHECK(max_abs(choi(same) - choi(n)) < 1e-12);
  const Matrix u1 = haar_unitary(2, rng), u2 = haar_unitary(2, rng);
  const auto m = degrade(n, {{0.5, u1, unitary_channel(u1.adjoint())}, {0.5, u2, identity_channel(2)}});
  // Unital: M(I/2) = I/2.
  CHECK(max_abs(m.apply(Matrix(Matrix::Identity(2, 2) / 2.0)) - Matrix::Identity(2, 2) / 2.0) < 1e-12);
  for (int k = 0; k < 5; ++k) {
    const auto game = bell_game(random_pmf(4, rng));
    REQUIRE(channel_reward(m, game, quick(k)).value <= channel_reward(n, game, quick(k)).value + 1e-6);
  }
  const auto scramble_all = completely_randomizing(2);
  const auto ru = degrade(n, {{1.0, Matrix::Identity(2, 2), scramble_all}});
  const RealVector p = random_pmf(4, rng);
  CHECK(channel_reward(ru, bell_game(p), quick()).value ==
        doctest::Approx(analytic_reward(ZooKind::Replacement, 1.0, GameKind::Bell, p)).epsilon(1e-6));
  CHECK_THROWS_AS(degrade(n, {{0.5, Matrix::Identity(2, 2), identity_channel(2)}}), DomainError);
  CHECK_THROWS_AS(degrade(n, {{1.0, Matrix::Identity(3, 3), identity_channel(2)}}), DimensionError);
}

TEST_CASE("channel comparison") {
  ChannelSampler s;
  s.n_games = 3;
  s.seed = 2;
  Rng rng(6);
  const auto n = unitary_channel(haar_unitary(2, rng));
  const auto m = random_channel(2, 2, 2, rng);
  CHECK(compare_channels(n, m, s, quick()).consistent);
  RealVector a(2), b(2);
  a << 0.9, 0.1;
  b << 0.6, 0.4;
  const auto ra = replacement(DensityOperator({2}, a.cast<cplx>().asDiagonal()), 2);
  const auto rb = replacement(DensityOperator({2}, b.cast<cplx>().asDiagonal()), 2);
  CHECK(compare_channels(ra, rb, s, quick()).consistent);
  const auto rev = compare_channels(rb, ra, s, quick());
  CHECK_FALSE(rev.consistent);
  CHECK(rev.witness.has_value());
  CHECK(rev.max_gap > 1e-6);
}

TEST_CASE("classical channels reduce to choosing the best input symbol") {
  Rng rng(7);
  for (int k = 0; k < 5; ++k) {
    // Classical channel z → y with transition matrix c; game on |0⟩⟨0| with PMF p.
    const RealMatrix c = random_column_stochastic(3, 3, rng);
    std::vector<Matrix> kraus;
    for (Eigen::Index z = 0; z < 3; ++z)
      for (Eigen::Index y = 0; y < 3; ++y) {
        Matrix kk = Matrix::Zero(3, 3);
        kk(y, z) = std::sqrt(c(y, z));
        kraus.push_back(kk);
      }
    const QuantumChannel n({3}, {3}, kraus);
    const RealVector p = random_pmf(3, rng);
    std::vector<ChannelGameEntry> entries;
    for (int x = 0; x < 3; ++x) entries.push_back({p(x), DensityOperator({3, 1}, basis_projector(3, 0))});
    const ChannelGameSpec game(entries);
    double best = 0.0;
    for (Eigen::Index z = 0; z < 3; ++z) {
      RealVector col = c.col(z);
      std::sort(col.data(), col.data() + 3, std::greater<>());
      double v = 0.0;
      for (int x = 0; x < 3; ++x) v += p(x) * col.head(x + 1).sum();
      best = std::max(best, v);
    }
    REQUIRE(std::abs(channel_reward(n, game, quick(k)).value - best) < 1e-6);
  }
}

TEST_CASE("output purity") {
  Rng rng(8);
  CHECK(max_output_purity(unitary_channel(haar_unitary(3, rng)), quick()).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(max_output_purity(depolarizing(0.4), quick()).value == doctest::Approx(0.68).epsilon(1e-8));
  const auto sigma = random_density({2}, rng);
  const double tr2 = (sigma.matrix() * sigma.matrix()).trace().real();
  CHECK(max_output_purity(replacement(sigma, 3), quick()).value == doctest::Approx(tr2).epsilon(1e-9));
}

TEST_CASE("purity games") {
  const auto pu = purity_game(unitary_channel(hadamard()), pure_state({2}, ket(2, 0)));
  CHECK(pu.game.entries()[0].p == doctest::Approx(1.0));
  CHECK(pu.alpha == doctest::Approx(1.0));
  const double g = 0.4;
  const auto zero = pure_state({2}, ket(2, 0));
  const auto pg = purity_game(depolarizing(g), zero);
  double total = 0.0;
  for (const auto& e : pg.game.entries()) total += e.p;
  CHECK(total == doctest::Approx(1.0));
  ChannelGameOptions o = quick();
  o.extra_replacements = {zero};
  const double expect = pg.alpha * ((1 - g / 2) * (1 - g / 2) + (g / 2) * (g / 2));
  CHECK(std::abs(channel_reward(depolarizing(g), pg.game, o).value - expect) < 1e-5);
}
