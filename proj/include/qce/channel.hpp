#pragma once

#include <string>
#include <vector>

#include "qce/linalg.hpp"

namespace qce {

/// A CPTP map in Kraus form. Each Kraus operator is (∏out_dims)×(∏in_dims).
class QuantumChannel {
 public:
  QuantumChannel(Dims in_dims, Dims out_dims, std::vector<Matrix> kraus);

  const Dims& in_dims() const { return in_dims_; }
  const Dims& out_dims() const { return out_dims_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  std::size_t in_dim() const { return product(in_dims_); }
  std::size_t out_dim() const { return product(out_dims_); }

  DensityOperator apply(const DensityOperator& rho) const;
  // Linear action on an arbitrary operator of matching size.
  Matrix apply(const Matrix& x) const;

  // Same map with its subsystem bookkeeping replaced (products must agree).
  QuantumChannel with_dims(Dims in_dims, Dims out_dims) const;

 private:
  Dims in_dims_;
  Dims out_dims_;
  std::vector<Matrix> kraus_;
};

// Unnormalized Choi matrix Σ|i⟩⟨j| ⊗ N(|i⟩⟨j|) on (in ⊗ out).
Matrix choi(const QuantumChannel& ch);
QuantumChannel from_choi(const Matrix& j, const Dims& in_dims, const Dims& out_dims);
// Re-derives a minimal Kraus set through the Choi matrix.
QuantumChannel compress(const QuantumChannel& ch);

QuantumChannel compose(const QuantumChannel& outer, const QuantumChannel& inner);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);
// Mixture Σ w_k ch_k of channels with equal shapes.
QuantumChannel mixture(const std::vector<double>& weights, const std::vector<QuantumChannel>& chans);

// Acts with `ch` on subsystem k of a multipartite operator; other factors untouched.
Matrix apply_on(const QuantumChannel& ch, const Matrix& x, const Dims& dims, std::size_t k);
DensityOperator apply_on(const QuantumChannel& ch, const DensityOperator& rho, std::size_t k);

// Channel zoo.
QuantumChannel identity_channel(std::size_t d);
QuantumChannel unitary_channel(const Matrix& u);
QuantumChannel isometry_channel(const Matrix& v, Dims in_dims, Dims out_dims);
QuantumChannel depolarizing(double gamma, std::size_t d = 2);
QuantumChannel classical_identity(std::size_t d = 2);
QuantumChannel dephasing(double gamma, std::size_t d = 2);
QuantumChannel povm_channel(const std::vector<Matrix>& elements);
QuantumChannel amplitude_damping(double gamma);
QuantumChannel replacement(const DensityOperator& sigma, std::size_t d_in);
QuantumChannel completely_randomizing(std::size_t d);
// Discards nothing: maps ρ to ρ ⊗ σ.
QuantumChannel append_state(const DensityOperator& sigma, std::size_t d_in);
// Traces out subsystem k of an input with the given dims.
QuantumChannel trace_out(const Dims& dims, std::size_t k);
// Reorders subsystems as permute_subsystems does.
QuantumChannel permutation_channel(const Dims& dims, const std::vector<std::size_t>& order);

// Rows of the noisy-channel table.
enum class ZooKind { Unitary, ClassicalIdentity, Depolarizing, Povm, AmplitudeDamping, Replacement, Dephasing };

std::vector<ZooKind> all_zoo_kinds();
std::string zoo_name(ZooKind kind);
ZooKind zoo_kind_from_name(const std::string& name);
// The fixed replacement target used for the table row: (1−γ)|0⟩⟨0| + γ u₂.
DensityOperator zoo_replacement_state(double gamma);
// Qubit instance of a table row; Unitary uses the Hadamard gate, Povm the
// computational projective measurement.
QuantumChannel make_zoo(ZooKind kind, double gamma);

}  // namespace qce
