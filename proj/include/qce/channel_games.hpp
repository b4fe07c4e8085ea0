#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qce/channel.hpp"
#include "qce/state_games.hpp"

namespace qce {

struct ChannelGameEntry {
  double p;
  DensityOperator state;  // on [A, B]
};

/// Classical-quantum game state Σ_x p_x |x⟩⟨x| ⊗ ρ_x; entry k has guess budget k+1.
class ChannelGameSpec {
 public:
  explicit ChannelGameSpec(std::vector<ChannelGameEntry> entries);
  const std::vector<ChannelGameEntry>& entries() const { return entries_; }
  std::size_t dim_a() const { return entries_[0].state.dims()[0]; }
  std::size_t dim_b() const { return entries_[0].state.dims()[1]; }

 private:
  std::vector<ChannelGameEntry> entries_;
};

enum class GameKind { Bell, Zero };

// φ⁺ for every x with |X| = 4, or |0⟩⟨0| (trivial B) with |X| = 2. Shorter
// PMFs are zero-padded.
ChannelGameSpec bell_game(const RealVector& p);
ChannelGameSpec zero_game(const RealVector& p);
ChannelGameSpec table_game(GameKind kind, const RealVector& p);

// Σ_x p_x ‖(N∘E ⊗ id_B)(ρ_x)‖_(x), E acting on A.
double channel_reward_fixed(const QuantumChannel& n, const QuantumChannel& e, const ChannelGameSpec& game);

struct ChannelGameOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  std::size_t kraus_rank = 0;  // 0 means |A|²
  std::size_t max_iters = 1500;
  std::size_t polish = 2;  // structured candidates refined by local search
  std::vector<DensityOperator> extra_replacements;  // states on N's input
  std::vector<QuantumChannel> extra_preprocessings;
};

// Maximizes the reward over preprocessing channels E: A → N's input.
RewardReport channel_reward(const QuantumChannel& n, const ChannelGameSpec& game, const ChannelGameOptions& opts = {});

// Closed-form rewards of the qubit zoo rows (see make_zoo).
double analytic_reward(ZooKind kind, double gamma, GameKind game, const RealVector& p);
// The bell-game amplitude-damping entry as printed in the summary table,
// (1−γ/2)p₁ + γ/2, which disagrees with the derivation for p₁ < 1.
double printed_amplitude_damping_bell(double gamma, const RealVector& p);

struct DegradePart {
  double p;
  Matrix v;           // isometry on N's output
  QuantumChannel e;   // preprocessing into N's input
};
// Σ_z p_z V_z∘N∘E_z.
QuantumChannel degrade(const QuantumChannel& n, const std::vector<DegradePart>& parts);

struct ChannelSampler {
  std::size_t n_games = 20;
  std::uint64_t seed = 0;
  bool fixed_w_games = true;  // single-budget games on a trivial input
  std::size_t max_dim = 0;    // 0 means the dimension bound from the channels
};

struct ChannelComparison {
  bool consistent;  // no sampled game ranks M above N
  std::optional<ChannelGameSpec> witness;
  double n_value = 0.0;
  double m_value = 0.0;
  double max_gap = -1.0;  // largest reward(M) − reward(N) seen
  std::size_t games_checked = 0;
};

// Falsification test of M ≾ N.
ChannelComparison compare_channels(const QuantumChannel& n, const QuantumChannel& m, const ChannelSampler& sampler = {},
                                   const ChannelGameOptions& opts = {});
std::vector<ChannelGameSpec> sample_channel_games(const QuantumChannel& n, const QuantumChannel& m,
                                                  const ChannelSampler& sampler);

struct PurityResult {
  double value;
  Vector input;
};
// max over pure ψ of Tr[N(ψ)²].
PurityResult max_output_purity(const QuantumChannel& n, const ChannelGameOptions& opts = {});

struct PurityGame {
  ChannelGameSpec game;
  double alpha;
};
// Trivial-B game on |0⟩⟨0|_A (A = m's input) with Σ_{x≥j} p_x = α λ_j(m(ρ*)).
PurityGame purity_game(const QuantumChannel& m, const DensityOperator& rho_star);

}  // namespace qce
