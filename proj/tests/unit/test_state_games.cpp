#include <doctest.h>

#include <cmath>

#include "qce/classical.hpp"
#include "qce/cusc.hpp"
#include "qce/random.hpp"
#include "qce/state_games.hpp"

using namespace qce;

namespace {

StateGameOptions quick(std::uint64_t seed = 0) {
  StateGameOptions o;
  o.restarts = 8;
  o.seed = seed;
  return o;
}

DensityOperator product_zero(std::size_t d) {
  return product_state(pure_state({d}, ket(d, 0)), pure_state({d}, ket(d, 0)));
}

}  // namespace

TEST_CASE("reward for a fixed Bob measurement") {
  Rng rng(1);
  const Matrix comp = Matrix::Identity(2, 2);
  for (int k = 0; k < 5; ++k) CHECK(reward_given_bob(phi_plus(2), random_host(2, 3, rng), comp) == doctest::Approx(1.0));
  const auto prod = product_state(maximally_mixed({2}), random_density({2}, rng));
  CHECK(reward_given_bob(prod, HostMatrix::fixed(1, 2), haar_unitary(2, rng)) == doctest::Approx(0.5));
  for (int k = 0; k < 20; ++k) {
    const auto p = random_joint(3, 3, rng);
    const auto t = random_host(3, 2, rng);
    std::vector<std::size_t> f;
    REQUIRE(std::abs(reward_given_bob(embed_classical(p), t, Matrix::Identity(3, 3), &f) - prob_T(p, t)) < 1e-12);
    REQUIRE(f.size() == 3);
  }
}

TEST_CASE("reward without adversary") {
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const auto r = reward_noadv(phi_plus(2), random_host(2, 2, rng), quick(k));
    REQUIRE(std::abs(r.value - 1.0) < 1e-6);
    REQUIRE(r.strategy.has_value());
    REQUIRE(r.certified);
  }
  for (int k = 0; k < 5; ++k) {
    const auto p = random_joint(3, 3, rng);
    const auto t = random_host(3, 3, rng);
    REQUIRE(std::abs(reward_noadv(embed_classical(p), t, quick(k)).value - prob_T(p, t)) < 1e-6);
  }
  // Trivial Bob: Σ_w t_w ‖ρ_A‖_(w) with no search.
  const auto rho = random_density({3, 1}, rng);
  const auto t = random_host(3, 2, rng);
  const RealVector e = eig_desc(rho.matrix());
  double expect = 0.0;
  for (Eigen::Index z = 0; z < 2; ++z) {
    double v = 0.0;
    for (Eigen::Index w = 0; w < 3; ++w) v += t.t()(w, z) * e.head(w + 1).sum();
    expect = std::max(expect, v);
  }
  CHECK(reward_noadv(rho, t, quick()).value == doctest::Approx(expect).epsilon(1e-12));
  // The reported strategy attains the reported value.
  const auto rho2 = random_density({2, 2}, rng);
  const auto t2 = random_host(2, 2, rng);
  const auto r2 = reward_noadv(rho2, t2, quick());
  CHECK(reward_given_bob(rho2, t2, r2.strategy->bob_basis) == doctest::Approx(r2.value).epsilon(1e-12));
  CHECK(max_abs(r2.strategy->bob_basis.adjoint() * r2.strategy->bob_basis - Matrix::Identity(2, 2)) < 1e-9);
}

TEST_CASE("scrambling") {
  Rng rng(3);
  const auto rho = random_density({2, 2}, rng);
  CHECK(max_abs(scramble(rho, haar_unitary(2, rng), {{0, 1}}).matrix() - rho.matrix()) < 1e-12);
  const auto sa = random_density({2}, rng), sb = random_density({2}, rng);
  const auto es = eigh_desc(sa.matrix());
  const Matrix mub = es.vectors * fourier_matrix(2);
  const auto out = scramble(product_state(sa, sb), mub, {{0}, {1}});
  CHECK(max_abs(out.matrix() - kron(Matrix::Identity(2, 2) / 2.0, sb.matrix())) < 1e-12);
  const auto c = scramble(phi_plus(2), Matrix::Identity(2, 2), {{0}, {1}});
  CHECK(max_abs(c.matrix() - (basis_projector(4, 0) + basis_projector(4, 3)) / 2.0) < 1e-12);
  CHECK_THROWS_AS(scramble(rho, Matrix::Identity(2, 2), {{0}}), DomainError);
  CHECK_THROWS_AS(scramble(rho, Matrix::Identity(2, 2), {{0, 1}, {1}}), DomainError);
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52};
  for (std::size_t n = 1; n <= 5; ++n) CHECK(set_partitions(n).size() == bell[n]);
}

TEST_CASE("reward with adversary") {
  Rng rng(4);
  for (int k = 0; k < 3; ++k) CHECK(reward_adv(phi_plus(2), random_host(2, 2, rng), quick(k)).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(reward_adv(product_zero(2), HostMatrix::fixed(1, 2), quick()).value == doctest::Approx(0.5).epsilon(1e-6));
  const auto pure_a = DensityOperator({2, 1}, basis_projector(2, 0));
  const auto r = reward_adv(pure_a, HostMatrix::fixed(1, 2), quick());
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
  REQUIRE(r.adversary.has_value());
  CHECK(r.adversary->partition.size() == 2);
  CHECK_FALSE(r.certified);
  for (int k = 0; k < 5; ++k) {
    const auto rho = random_density({2, 2}, rng);
    const auto t = random_host(2, 2, rng);
    REQUIRE(reward_adv(rho, t, quick(k)).value <= reward_noadv(rho, t, quick(k)).value + 1e-9);
  }
  CHECK_THROWS_AS(reward_adv(random_density({6, 1}, rng), HostMatrix::fixed(1, 6), quick()), DomainError);
}

TEST_CASE("reward mixes the two regimes affinely") {
  Rng rng(5);
  const auto rho = random_density({2, 2}, rng);
  const auto t = random_host(2, 2, rng);
  const double r0 = reward(rho, {t, 0.0}, quick()).value;
  const double r1 = reward(rho, {t, 1.0}, quick()).value;
  const double rh = reward(rho, {t, 0.5}, quick()).value;
  const double rq = reward(rho, {t, 0.25}, quick()).value;
  CHECK(rh == doctest::Approx(0.5 * (r0 + r1)).epsilon(1e-12));
  CHECK(rq == doctest::Approx(0.75 * r0 + 0.25 * r1).epsilon(1e-12));
  CHECK(r0 >= 0.0);
  CHECK(r0 <= 1.0 + 1e-12);
  for (int k = 0; k < 5; ++k) {
    const StateGameSpec g{random_host(2, 3, rng), rng.uniform()};
    REQUIRE(reward(phi_plus(2), g, quick(k)).value == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(reward(product_zero(2), {HostMatrix::fixed(1, 2), 1.0}, quick()).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("state comparison") {
  GameSampler s;
  s.n_games = 4;
  s.seed = 1;
  const auto forward = compare_states(phi_plus(2), product_zero(2), s, quick());
  CHECK(forward.consistent);
  const auto reverse = compare_states(product_zero(2), phi_plus(2), s, quick());
  CHECK_FALSE(reverse.consistent);
  REQUIRE(reverse.witness.has_value());
  CHECK(reverse.sigma_value > reverse.rho_value + 2e-6);
  Rng rng(6);
  const auto rho = random_density({2, 2}, rng);
  CHECK(compare_states(rho, rho, s, quick()).consistent);
  // Trivial B: spectra (0.9, 0.1, 0) vs (0.6, 0.3, 0.1); the flatter state loses.
  RealVector a(3), b(3);
  a << 0.9, 0.1, 0.0;
  b << 0.6, 0.3, 0.1;
  const DensityOperator ra({3, 1}, a.cast<cplx>().asDiagonal()), rb({3, 1}, b.cast<cplx>().asDiagonal());
  CHECK(compare_states(ra, rb, s, quick()).consistent);
  const auto w = compare_states(rb, ra, s, quick());
  CHECK_FALSE(w.consistent);
  REQUIRE(w.witness.has_value());
}

TEST_CASE("CUSC channels do not improve rewards") {
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto rho = random_density({2, 2}, rng);
    const auto ch = random_cusc(2, 2, rng);
    const auto out = DensityOperator(ch.out_dims(), ch.apply(rho.matrix()));
    const StateGameSpec g{random_host(2, 2, rng), static_cast<double>(rng.index(2))};
    REQUIRE(reward(out, g, quick(k)).value <= reward(rho, g, quick(k)).value + 2e-6);
  }
}

TEST_CASE("restart results do not depend on thread count") {
  Rng rng(8);
  const auto rho = random_density({2, 3}, rng);
  const auto t = random_host(2, 3, rng);
  setenv("QCE_THREADS", "1", 1);
  const auto a = reward_noadv(rho, t, quick(3));
  setenv("QCE_THREADS", "4", 1);
  const auto b = reward_noadv(rho, t, quick(3));
  unsetenv("QCE_THREADS");
  CHECK(a.value == b.value);
  CHECK(max_abs(a.strategy->bob_basis - b.strategy->bob_basis) == 0.0);
}
