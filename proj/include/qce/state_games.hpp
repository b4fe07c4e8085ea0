#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qce/channel.hpp"
#include "qce/classical.hpp"

namespace qce {

struct StateGameSpec {
  HostMatrix t;
  double p_adv = 0.0;
};

struct StateStrategy {
  Matrix bob_basis;            // columns are Bob's measurement vectors
  std::vector<std::size_t> f;  // z ↦ z'
};

using Partition = std::vector<std::vector<std::size_t>>;

struct AdversaryChoice {
  Matrix basis;  // columns are the adversary's basis vectors on A
  Partition partition;
};

struct RewardReport {
  double value = 0.0;
  std::optional<StateStrategy> strategy;
  std::optional<AdversaryChoice> adversary;
  std::optional<QuantumChannel> preprocessing;
  std::size_t restarts_used = 0;
  // True when value is attained by the reported strategy, i.e. a lower bound
  // on a maximum. Min-max values are not certified either way.
  bool certified = true;
};

struct StateGameOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  std::size_t max_iters = 400;  // objective evaluations per local search
  std::size_t adversary_restarts = 4;
  std::size_t adversary_inner_restarts = 4;
  std::size_t adversary_max_iters = 150;
  std::vector<Matrix> extra_bob_bases;
};

// Σ_z max_{z'} Σ_w t_{w|z'} ‖Tr_B[(I⊗Π_z) ρ (I⊗Π_z)]‖_(w) for Π_z the
// projectors onto the columns of bob_basis. The maximizing response is
// written to *f when given.
double reward_given_bob(const DensityOperator& rho, const HostMatrix& t, const Matrix& bob_basis,
                        std::vector<std::size_t>* f = nullptr);

RewardReport reward_noadv(const DensityOperator& rho, const HostMatrix& t, const StateGameOptions& opts = {});

// Σ_j Π_j ρ Π_j with Π_j = Σ_{i∈S_j} |ψ_i⟩⟨ψ_i| ⊗ I_B.
DensityOperator scramble(const DensityOperator& rho, const Matrix& basis, const Partition& partition);
std::vector<Partition> set_partitions(std::size_t n);

// Largest value the adversary can never push the reward below.
double adversary_floor(const HostMatrix& t, std::size_t da);

RewardReport reward_adv(const DensityOperator& rho, const HostMatrix& t, const StateGameOptions& opts = {});
RewardReport reward(const DensityOperator& rho, const StateGameSpec& game, const StateGameOptions& opts = {});

struct GameSampler {
  std::size_t n_games = 20;
  std::uint64_t seed = 0;
  bool fixed_w_games = true;  // also try every deterministic budget with p ∈ {0, 1}
};

struct StateComparison {
  bool consistent;  // no sampled game ranks σ above ρ
  std::optional<StateGameSpec> witness;
  double rho_value = 0.0;
  double sigma_value = 0.0;
  std::size_t games_checked = 0;
};

// Falsification test of σ ≾ ρ: looks for a game where σ beats ρ by more than 2e-6.
StateComparison compare_states(const DensityOperator& rho, const DensityOperator& sigma, const GameSampler& sampler = {},
                               const StateGameOptions& opts = {});

}  // namespace qce
