#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "qce/channel.hpp"
#include "qce/random.hpp"

namespace qce {

struct CheckResult {
  bool ok;
  double violation;
};

struct CuscVerdict {
  bool conditionally_unital;
  bool semicausal_choi;
  std::optional<bool> semicausal_operational;
  double max_violation;  // largest entry deviation over the two Choi tests
  double unital_violation;
  double semicausal_violation;
  std::optional<double> operational_violation;
};

// Channels here are bipartite: in_dims [A, B], out_dims [A', B'].
CheckResult is_conditionally_unital(const QuantumChannel& ch, double tol = 1e-7);
// Choi condition J_{ABB'} = u_A ⊗ J_{BB'}.
CheckResult is_semicausal(const QuantumChannel& ch, double tol = 1e-7);
// Randomized check of Tr_A N((M⊗id)ρ) = Tr_A N(ρ); returns the largest deviation seen.
CheckResult semicausal_operational(const QuantumChannel& ch, std::size_t trials, std::uint64_t seed, double tol = 1e-7);
CuscVerdict is_cusc(const QuantumChannel& ch, double tol = 1e-7, std::size_t operational_trials = 0,
                    std::uint64_t seed = 0);

// Σ_j D^(j) ⊗ F^(j): D^(j) doubly stochastic acting on computational-basis
// populations of A (fully dephasing it), F^(j) a CP map on B given by Kraus
// operators, with Σ_j F^(j) trace preserving.
QuantumChannel cds_channel(const std::vector<RealMatrix>& ds, const std::vector<std::vector<Matrix>>& fs);

// N(ρ_AB) = E((id_A ⊗ F)(ρ_AB)) with F: B → R⊗B' an isometry (out_dims [R, B'])
// and E: A⊗R → A' (in_dims [A, R]).
QuantumChannel semicausal_from_parts(const QuantumChannel& f_iso, const QuantumChannel& e);

// CUSC channel on [d, d] that maps φ⁺ to the target by teleporting the A-half
// of a locally prepared copy.
QuantumChannel teleport_cusc(const DensityOperator& target);

// Generalized Bell state (X^a Z^b ⊗ I)|φ⁺⟩, index j = a·d + b.
Vector bell_basis_vector(std::size_t d, std::size_t j);

// CUSC channel with input [A·A2, B] = [d², d] (A slower than A2) and output
// [d², 1], Choi Σ_j φ^(j)_AB ⊗ I_A2 ⊗ |j⟩⟨j|. Sends φ⁺_AB ⊗ u_A2 to |0⟩⟨0|.
QuantumChannel bell_basis_scrambler(std::size_t d);

// E: (Ã, B̃) → A with Choi |0⟩⟨0| ⊗ dρ_{B̃A} + Σ_{x≥1} |x⟩⟨x| ⊗ (I − dρ)/(d−1).
// Requires λ_max(ρ) ≤ 1/d and ρ_B = u_B.
QuantumChannel nonneg_witness_channel(const DensityOperator& rho);
// The semi-causal channel [d, 1] → [d, d] ω ↦ E(ω ⊗ φ⁺_{B̃B'}); maps |0⟩⟨0| to ρ.
QuantumChannel nonneg_witness_composite(const DensityOperator& rho);

struct SeparableTerm {
  double p;
  Vector psi;  // on A
  Vector phi;  // on B
};
// Σ_j p_j U_j ⊗ V_j with U_j|0⟩ = ψ_j and V_j|0⟩ = φ_j.
QuantumChannel separable_prep_channel(const std::vector<SeparableTerm>& parts);
// Unitary (Householder reflection up to phase) with U|0⟩ = ψ/‖ψ‖.
Matrix householder_prep(const Vector& psi);

// Isometry C^{d_small} → C^{d_large} onto the first basis vectors.
Matrix embedding_isometry(std::size_t d_small, std::size_t d_large);
// Zero-pads subsystem k of a state up to dimension d_large.
DensityOperator embed_subsystem(const DensityOperator& rho, std::size_t k, std::size_t d_large);

// Random channel via a Haar isometry; the Kraus count is raised to ⌈d_in/d_out⌉ if smaller.
QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t kraus_count, Rng& rng);
// Random bipartite CUSC channel on [dA, dB] → [dA, dB] drawn from the constructors above.
QuantumChannel random_cusc(std::size_t da, std::size_t db, Rng& rng);

}  // namespace qce
