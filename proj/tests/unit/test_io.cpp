#include <doctest.h>

#include <cmath>
#include <limits>

#include "qce/cusc.hpp"
#include "qce/io.hpp"
#include "qce/random.hpp"

using namespace qce;

TEST_CASE("rounding to 12 significant digits") {
  CHECK(round12(0.1 + 0.2) == 0.3);
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
  CHECK(round12(-123456.7890123456) == -123456.789012);
  CHECK(round12(0.0) == 0.0);
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(0.5).get<double>() == 0.5);
}

TEST_CASE("matrix, state, and channel round trips") {
  Rng rng(1);
  const Matrix m = haar_unitary(3, rng);
  const Matrix back = matrix_from_json(json::parse(matrix_to_json(m).dump()));
  CHECK(max_abs(back - m) < 1e-11);
  const auto rho = random_density({2, 3}, rng);
  const auto r2 = density_from_json(json::parse(density_to_json(rho).dump()));
  CHECK(r2.dims() == rho.dims());
  CHECK(max_abs(r2.matrix() - rho.matrix()) < 1e-11);
  const auto ch = random_channel(2, 3, 2, rng);
  const auto c2 = channel_from_json(json::parse(channel_to_json(ch).dump()));
  CHECK(max_abs(choi(c2) - choi(ch)) < 1e-10);
  json cj{{"in_dims", {2}}, {"out_dims", {2}}, {"choi", matrix_to_json(phi_plus_unnormalized(2))}};
  CHECK(max_abs(choi(channel_from_json(cj)) - phi_plus_unnormalized(2)) < 1e-9);
  // Real-valued shorthand entries.
  const json plain{{"rows", 2}, {"cols", 2}, {"dims", {2}}, {"data", {0.5, 0, 0, 0.5}}};
  CHECK(max_abs(density_from_json(plain).matrix() - Matrix::Identity(2, 2) / 2.0) == 0.0);
}

TEST_CASE("malformed JSON is rejected") {
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 2, 3}}}), DomainError);
  CHECK_THROWS_AS(matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {"x"}}}), DomainError);
  CHECK_THROWS_AS(channel_from_json(json{{"in_dims", {2}}, {"out_dims", {2}}}), DomainError);
  CHECK_THROWS_AS(state_game_from_json(json::parse(R"({"t": [[1.0]], "p_adv": 1.5})")), DomainError);
  CHECK_THROWS_AS(density_from_json(json{{"rows", 2}, {"cols", 2}, {"data", {1, 0, 0, 1}}, {"dims", {2}}}), DomainError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), Error);
}

TEST_CASE("game round trips") {
  Rng rng(2);
  const StateGameSpec g{random_host(2, 3, rng), 0.25};
  const auto g2 = state_game_from_json(json::parse(state_game_to_json(g).dump()));
  CHECK((g2.t.t() - g.t.t()).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(g2.p_adv == 0.25);
  const auto cg = bell_game(random_pmf(4, rng));
  const auto cg2 = channel_game_from_json(json::parse(channel_game_to_json(cg).dump()));
  REQUIRE(cg2.entries().size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(cg2.entries()[k].p - cg.entries()[k].p) < 1e-11);
}

TEST_CASE("CSV joints") {
  const auto p = joint_from_csv("# comment\n0.25,0.25\n0.5, 0\n");
  CHECK(p.alice() == 2);
  CHECK(p.bob() == 2);
  CHECK(p.p()(1, 0) == 0.5);
  const auto p2 = joint_from_csv(joint_to_csv(p));
  CHECK((p2.p() - p.p()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(joint_from_csv("0.5,0.5\n0.5\n"), DomainError);
  CHECK_THROWS_AS(joint_from_csv("a,b\n"), DomainError);
  CHECK_THROWS_AS(joint_from_csv(""), DomainError);
}

TEST_CASE("result round trips") {
  SimResult s{41, 100, 0.41, std::sqrt(0.41 * 0.59 / 100), 7};
  const auto s2 = sim_from_json(json::parse(sim_to_json(s).dump()));
  CHECK(s2.wins == 41);
  CHECK(s2.rounds == 100);
  CHECK(s2.seed == 7);
  CHECK(s2.win_rate == 0.41);
  const auto v = verdict_to_json(is_cusc(identity_channel(4).with_dims({2, 2}, {2, 2})));
  CHECK(v.at("conditionally_unital").get<bool>());
  CHECK(v.at("semicausal_choi").get<bool>());
}
