#pragma once

#include <cstdint>
#include <optional>

#include "qce/channel_games.hpp"
#include "qce/state_games.hpp"

namespace qce {

struct SimResult {
  std::uint64_t wins = 0;
  std::uint64_t rounds = 0;
  double win_rate = 0.0;
  double std_err = 0.0;  // sqrt(r(1−r)/rounds)
  std::uint64_t seed = 0;
};

// Rounds are simulated in blocks of this size, each block with its own RNG
// substream, so totals do not depend on how blocks are spread over threads.
inline constexpr std::uint64_t sim_block_rounds = 8192;

// Born distribution of measuring `sigma` (possibly unnormalized) in the
// orthonormal columns of `basis`.
RealVector outcome_distribution(const Matrix& sigma, const Matrix& basis);

SimResult simulate_state_game(const DensityOperator& rho, const StateGameSpec& game, const StateStrategy& strategy,
                              const std::optional<AdversaryChoice>& adversary, std::uint64_t rounds, std::uint64_t seed);

SimResult simulate_channel_game(const QuantumChannel& n, const QuantumChannel& e, const ChannelGameSpec& game,
                                std::uint64_t rounds, std::uint64_t seed);

}  // namespace qce
