#include <doctest.h>

#include <cmath>

#include "qce/channel.hpp"
#include "qce/cusc.hpp"
#include "qce/random.hpp"

using namespace qce;

namespace {

Matrix plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  v /= std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("apply examples") {
  Rng rng(1);
  const auto rho = random_density({2}, rng);
  CHECK(max_abs(identity_channel(2).apply(rho).matrix() - rho.matrix()) < 1e-14);
  CHECK(max_abs(completely_randomizing(2).apply(rho).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-12);
  const double g = 0.35;
  const Matrix out = amplitude_damping(g).apply(basis_projector(2, 1));
  CHECK(out(0, 0).real() == doctest::Approx(g));
  CHECK(out(1, 1).real() == doctest::Approx(1 - g));
  CHECK_THROWS_AS(identity_channel(3).apply(rho), DimensionError);
}

TEST_CASE("Choi matrices") {
  CHECK(max_abs(choi(identity_channel(2)) - phi_plus_unnormalized(2)) < 1e-14);
  Rng rng(2);
  const auto sigma = random_density({2}, rng);
  CHECK(max_abs(choi(replacement(sigma, 3)) - kron(Matrix::Identity(3, 3), sigma.matrix())) < 1e-12);
  const double g = 0.3;
  const Matrix expect = (1 - g) * phi_plus_unnormalized(2) + g * kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2) / 2.0);
  CHECK(max_abs(choi(depolarizing(g)) - expect) < 1e-12);
  CHECK(choi(depolarizing(g)).trace().real() == doctest::Approx(2.0));
}

TEST_CASE("from_choi round trips and rejects bad input") {
  Rng rng(3);
  const auto id = from_choi(phi_plus_unnormalized(2), {2}, {2});
  for (int k = 0; k < 10; ++k) {
    const auto rho = random_density({2}, rng);
    REQUIRE(max_abs(id.apply(rho).matrix() - rho.matrix()) < 1e-8);
  }
  const auto sigma = random_density({2}, rng);
  const auto rep = from_choi(kron(Matrix::Identity(2, 2), sigma.matrix()), {2}, {2});
  CHECK(max_abs(rep.apply(random_density({2}, rng)).matrix() - sigma.matrix()) < 1e-8);
  // Negative eigenvalue on the singlet direction with the trace-preserving marginal intact.
  const Vector v = (ket(4, 1) - ket(4, 2)) / std::sqrt(2.0);
  const Vector w = (ket(4, 1) + ket(4, 2)) / std::sqrt(2.0);
  const Matrix neg = phi_plus_unnormalized(2) + 0.1 * (w * w.adjoint() - v * v.adjoint());
  try {
    from_choi(neg, {2}, {2});
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("not completely positive") != std::string::npos);
  }
  CHECK_THROWS_AS(from_choi(2.0 * phi_plus_unnormalized(2), {2}, {2}), DomainError);
  for (auto kind : all_zoo_kinds()) {
    const auto ch = make_zoo(kind, 0.3);
    const auto back = from_choi(choi(ch), ch.in_dims(), ch.out_dims());
    REQUIRE(max_abs(choi(back) - choi(ch)) < 1e-7);
  }
}

TEST_CASE("random channels preserve trace and positivity") {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t din = 1 + rng.index(3), dout = 1 + rng.index(3);
    const auto ch = random_channel(din, dout, 1 + rng.index(4), rng);
    const Matrix j = choi(ch);
    REQUIRE(eig_desc(j).minCoeff() > -1e-9);
    REQUIRE(max_abs(partial_trace(j, {din, dout}, {0}) - Matrix::Identity(din, din)) < 1e-9);
    const Matrix out = ch.apply(random_density({din}, rng).matrix());
    REQUIRE(std::abs(out.trace().real() - 1.0) < 1e-9);
    REQUIRE(eig_desc(out).minCoeff() > -1e-9);
  }
}

TEST_CASE("composition and tensor products") {
  Rng rng(5);
  const Matrix u = haar_unitary(2, rng);
  const auto uu = compose(unitary_channel(u.adjoint()), unitary_channel(u));
  const auto rho = random_density({2}, rng);
  CHECK(max_abs(uu.apply(rho).matrix() - rho.matrix()) < 1e-12);
  const auto w = random_density({2}, rng), t = random_density({3}, rng);
  const auto out = tensor(identity_channel(2), completely_randomizing(3)).apply(product_state(w, t));
  CHECK(max_abs(out.matrix() - kron(w.matrix(), Matrix::Identity(3, 3) / 3.0)) < 1e-12);
  const double g1 = 0.2, g2 = 0.5;
  const auto c = compose(depolarizing(g1), depolarizing(g2));
  const auto d = depolarizing(1 - (1 - g1) * (1 - g2));
  for (int k = 0; k < 10; ++k) {
    const auto r = random_density({2}, rng);
    REQUIRE(max_abs(c.apply(r).matrix() - d.apply(r).matrix()) < 1e-9);
  }
  CHECK_THROWS_AS(compose(identity_channel(2), identity_channel(3)), DimensionError);
  const auto f = random_channel(2, 3, 2, rng), gch = random_channel(3, 2, 3, rng);
  CHECK(max_abs(compose(gch, f).apply(rho).matrix() - gch.apply(f.apply(rho)).matrix()) < 1e-9);
}

TEST_CASE("zoo channels match their formulas") {
  Rng rng(6);
  const double g = 0.37;
  const Matrix u2 = Matrix::Identity(2, 2) / 2.0;
  for (int k = 0; k < 20; ++k) {
    const Matrix r = random_density({2}, rng).matrix();
    Matrix deph = r;
    deph(0, 1) = deph(1, 0) = 0.0;
    REQUIRE(max_abs(depolarizing(g).apply(r) - ((1 - g) * r + g * u2)) < 1e-9);
    REQUIRE(max_abs(classical_identity().apply(r) - deph) < 1e-9);
    REQUIRE(max_abs(dephasing(g).apply(r) - ((1 - g) * r + g * deph)) < 1e-9);
    Matrix ad(2, 2);
    ad << r(0, 0) + g * r(1, 1), std::sqrt(1 - g) * r(0, 1), std::sqrt(1 - g) * r(1, 0), (1 - g) * r(1, 1);
    REQUIRE(max_abs(amplitude_damping(g).apply(r) - ad) < 1e-9);
    REQUIRE(max_abs(make_zoo(ZooKind::Replacement, g).apply(r) - zoo_replacement_state(g).matrix()) < 1e-9);
  }
  CHECK(max_abs(dephasing(1.0).apply(plus_state()) - u2) < 1e-12);
  const auto povm = povm_channel({basis_projector(2, 0), basis_projector(2, 1)});
  CHECK(max_abs(povm.apply(plus_state()) - u2) < 1e-12);
  const Matrix d3 = depolarizing(1.0, 3).apply(random_density({3}, rng).matrix());
  CHECK(max_abs(d3 - Matrix::Identity(3, 3) / 3.0) < 1e-12);
  CHECK_THROWS_AS(depolarizing(1.2), DomainError);
  CHECK_THROWS_AS(povm_channel({basis_projector(2, 0)}), DomainError);
  CHECK_THROWS_AS(amplitude_damping(-0.1), DomainError);
}

TEST_CASE("unitary channels preserve spectra") {
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_density({3}, rng);
    const auto out = unitary_channel(haar_unitary(3, rng)).apply(rho);
    REQUIRE((eig_desc(out.matrix()) - eig_desc(rho.matrix())).cwiseAbs().maxCoeff() < 1e-9);
  }
}
