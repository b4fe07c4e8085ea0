#include <doctest.h>

#include <cmath>
#include <limits>

#include "qce/channel.hpp"
#include "qce/cusc.hpp"
#include "qce/entropy.hpp"
#include "qce/random.hpp"

using namespace qce;

namespace {

const Divergence kBoth[] = {Divergence::Umegaki, Divergence::Dmax};

DensityOperator diag_state(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return DensityOperator({static_cast<std::size_t>(d.size())}, d.cast<cplx>().asDiagonal());
}

DensityOperator werner_singlet() {
  return DensityOperator({2, 2}, (Matrix::Identity(4, 4) - phi_plus(2).matrix()) / 3.0);
}

}  // namespace

TEST_CASE("von Neumann entropy examples") {
  CHECK(vn_entropy(maximally_mixed({2})) == doctest::Approx(1.0));
  Rng rng(1);
  CHECK(std::abs(vn_entropy(pure_state({3}, random_pure(3, rng)))) < 1e-9);
  CHECK(vn_entropy(diag_state({0.5, 0.25, 0.25})) == doctest::Approx(1.5));
  for (int k = 0; k < 100; ++k) {
    const auto rho = random_density({4}, rng);
    const double s = vn_entropy(rho);
    REQUIRE(s >= -1e-12);
    REQUIRE(s <= 2.0 + 1e-12);
  }
}

TEST_CASE("divergence examples") {
  Rng rng(2);
  const auto rho = random_density({3}, rng);
  for (auto d : kBoth) CHECK(std::abs(divergence(d, rho, rho)) < 1e-9);
  CHECK(divergence(Divergence::Umegaki, pure_state({2}, ket(2, 0)), maximally_mixed({2})) == doctest::Approx(1.0));
  CHECK(divergence(Divergence::Dmax, phi_plus(2), maximally_mixed({2, 2})) == doctest::Approx(2.0));
  const double inf = std::numeric_limits<double>::infinity();
  for (auto d : kBoth) CHECK(divergence(d, maximally_mixed({2}), pure_state({2}, ket(2, 0))) == inf);
  CHECK_THROWS_AS(divergence(Divergence::Umegaki, maximally_mixed({2}), maximally_mixed({3})), DimensionError);
  CHECK(divergence_from_name(divergence_name(Divergence::Dmax)) == Divergence::Dmax);
  CHECK_THROWS_AS(divergence_from_name("renyi"), DomainError);
}

TEST_CASE("divergences satisfy data processing") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto rho = random_density({2}, rng), sigma = random_density({2}, rng);
    const auto ch = random_channel(2, 3, 1 + rng.index(4), rng);
    const auto r2 = ch.apply(rho), s2 = ch.apply(sigma);
    for (auto d : kBoth) REQUIRE(divergence(d, r2, s2) <= divergence(d, rho, sigma) + 1e-7);
  }
}

TEST_CASE("conditional entropy examples") {
  for (auto d : kBoth) CHECK(cond_entropy_down(phi_plus(2), d) == doctest::Approx(-1.0).epsilon(1e-10));
  Rng rng(4);
  const auto w = random_density({2}, rng), t = random_density({3}, rng);
  CHECK(cond_entropy_down(product_state(w, t), Divergence::Umegaki) == doctest::Approx(vn_entropy(w)));
  CHECK(vn_cond_entropy(phi_plus(2)) == doctest::Approx(-1.0));
  CHECK(vn_cond_entropy(maximally_mixed({2, 2})) == doctest::Approx(1.0));
  CHECK(vn_cond_entropy(werner_singlet()) == doctest::Approx(std::log2(3.0) - 1.0));
  CHECK(coherent_information(phi_plus(2)) == doctest::Approx(1.0));
  CHECK(coherent_information(product_state(w, t)) == doctest::Approx(-vn_entropy(w)));
  for (int k = 0; k < 100; ++k) {
    const auto rho = random_density({2, 3}, rng);
    REQUIRE(std::abs(vn_cond_entropy(rho) - cond_entropy_down(rho, Divergence::Umegaki)) < 1e-8);
    REQUIRE(coherent_information(rho) == -vn_cond_entropy(rho));
  }
  for (std::size_t d = 2; d <= 4; ++d)
    for (auto div : kBoth)
      REQUIRE(std::abs(cond_entropy_down(phi_plus(d), div) + std::log2(static_cast<double>(d))) < 1e-8);
}

TEST_CASE("conditional entropy bounds") {
  Rng rng(5);
  const std::vector<Dims> shapes{{2, 2}, {2, 3}, {3, 2}};
  for (int k = 0; k < 500; ++k) {
    const Dims& dims = shapes[static_cast<std::size_t>(k) % 3];
    const auto rho = random_density(dims, 1 + rng.index(dims[0] * dims[1]), rng);
    const double lo = -std::log2(static_cast<double>(std::min(dims[0], dims[1])));
    for (auto d : kBoth) {
      const double h = cond_entropy_down(rho, d);
      REQUIRE(h >= lo - 1e-7);
      REQUIRE(h <= std::log2(static_cast<double>(dims[0])) + 1e-9);
    }
  }
  for (int k = 0; k < 200; ++k) {
    const auto sep = random_separable(2, 1 + rng.index(3), 1 + rng.index(8), rng);
    REQUIRE(vn_cond_entropy(sep) >= -1e-8);
    REQUIRE(coherent_information(sep) <= 1e-8);
  }
}

TEST_CASE("monotonicity under CUSC channels") {
  Rng rng(6);
  for (int k = 0; k < 100; ++k) {
    const std::size_t db = 2 + rng.index(2);
    const auto rho = random_density({2, db}, rng);
    const auto ch = random_cusc(2, db, rng);
    const auto out = DensityOperator(ch.out_dims(), ch.apply(rho.matrix()));
    REQUIRE(vn_cond_entropy(out) >= vn_cond_entropy(rho) - 1e-7);
    REQUIRE(cond_entropy_down(out, Divergence::Dmax) >= cond_entropy_down(rho, Divergence::Dmax) - 1e-7);
  }
}

TEST_CASE("additivity over interleaved pairs") {
  Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const auto rho = random_density({2, 2}, rng), tau = random_density({2, 3}, rng);
    const auto joint = interleave_pair(rho, tau);
    REQUIRE(joint.dims() == Dims{4, 6});
    for (auto d : kBoth)
      REQUIRE(std::abs(cond_entropy_down(joint, d) - cond_entropy_down(rho, d) - cond_entropy_down(tau, d)) < 1e-7);
  }
  // Product inputs regroup to the expected tensor factors.
  const auto a = random_density({2}, rng), b = random_density({2}, rng);
  const auto c = random_density({3}, rng), e = random_density({2}, rng);
  const auto joint = interleave_pair(product_state(a, b), product_state(c, e));
  CHECK(max_abs(joint.matrix() - kron_all({a.matrix(), c.matrix(), b.matrix(), e.matrix()})) < 1e-12);
}

TEST_CASE("self-duality and purification independence") {
  CondEntropyFn vn = [](const DensityOperator& r) { return vn_cond_entropy(r); };
  CHECK(dual_cond_entropy(vn, phi_plus(2)) == doctest::Approx(-1.0));
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto rho = random_density({2, 2}, rng);
    REQUIRE(std::abs(dual_cond_entropy(vn, rho) - vn_cond_entropy(rho)) < 1e-7);
  }
  const auto w = random_density({2}, rng), t = random_density({2}, rng);
  CHECK(dual_cond_entropy(vn, product_state(w, t)) == doctest::Approx(vn_entropy(w)));
  // A unitary on the purifying system leaves −H(A|C) unchanged.
  const auto rho = random_density({2, 2}, rng);
  const auto phi = purify(rho);
  const std::size_t c = phi.dims()[2];
  const Matrix u = kron(Matrix::Identity(4, 4), haar_unitary(c, rng));
  const auto rotated = DensityOperator(phi.dims(), u * phi.matrix() * u.adjoint());
  auto ac = [](const DensityOperator& p) {
    return DensityOperator({p.dims()[0], p.dims()[2]}, partial_trace(p.matrix(), p.dims(), {0, 2}));
  };
  CHECK(std::abs(vn_cond_entropy(ac(phi)) - vn_cond_entropy(ac(rotated))) < 1e-9);
}

TEST_CASE("isometric invariance on A") {
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density({2, 2}, rng);
    const Matrix v = kron(haar_isometry(3, 2, rng), Matrix::Identity(2, 2));
    const auto big = DensityOperator({3, 2}, v * rho.matrix() * v.adjoint());
    for (auto d : kBoth) REQUIRE(std::abs(cond_entropy_down(big, d) - cond_entropy_down(rho, d)) < 1e-7);
  }
}

TEST_CASE("states passing the witness hypothesis have nonnegative entropy") {
  Rng rng(10);
  int accepted = 0;
  for (int k = 0; k < 200; ++k) {
    // Mix towards u_AB until the eigenvalue bound holds; keep ρ_B = u_B by twirling B's marginal.
    const auto base = random_density({2, 2}, rng);
    const Matrix rb = partial_trace(base.matrix(), base.dims(), {1});
    const auto es = eigh_desc(rb);
    const Matrix inv = es.vectors * es.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * es.vectors.adjoint();
    const Matrix fix = kron(Matrix::Identity(2, 2), inv / std::sqrt(2.0));
    const DensityOperator balanced({2, 2}, fix * base.matrix() * fix.adjoint());
    const double g = rng.uniform();
    const DensityOperator rho({2, 2}, (1 - g) * balanced.matrix() + g * Matrix::Identity(4, 4) / 4.0);
    try {
      nonneg_witness_channel(rho);
    } catch (const DomainError&) {
      continue;
    }
    ++accepted;
    REQUIRE(vn_cond_entropy(rho) >= -1e-8);
  }
  CHECK(accepted > 10);
}
