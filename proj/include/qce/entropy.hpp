#pragma once

#include <functional>
#include <string>

#include "qce/linalg.hpp"

namespace qce {

enum class Divergence { Umegaki, Dmax };

std::string divergence_name(Divergence d);
Divergence divergence_from_name(const std::string& name);

// Eigenvalues below this are treated as zero.
inline constexpr double support_cutoff = 1e-12;

double vn_entropy(const DensityOperator& rho);
double vn_entropy(const RealVector& spectrum);
double shannon_entropy(const RealVector& p);

// D(ρ‖σ) in bits; +∞ when supp ρ ⊄ supp σ.
double divergence(Divergence d, const Matrix& rho, const Matrix& sigma);
double divergence(Divergence d, const DensityOperator& rho, const DensityOperator& sigma);

// log|A| − D(ρ_AB ‖ u_A ⊗ ρ_B). Multipartite inputs are grouped as A | rest
// unless `split` says how many leading subsystems form A.
double cond_entropy_down(const DensityOperator& rho, Divergence d, std::size_t split = 1);
double vn_cond_entropy(const DensityOperator& rho, std::size_t split = 1);
double coherent_information(const DensityOperator& rho);

using CondEntropyFn = std::function<double(const DensityOperator&)>;
// −H(A|C) on a purification φ_ABC.
double dual_cond_entropy(const CondEntropyFn& h, const DensityOperator& rho);

// Regroups ρ on (A, B) ⊗ τ on (A', B') into (A A') | (B B') dims [AA', BB'].
DensityOperator interleave_pair(const DensityOperator& rho, const DensityOperator& tau);

}  // namespace qce
