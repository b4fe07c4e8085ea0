#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qce/linalg.hpp"
#include "qce/random.hpp"

namespace qce {

/// Joint distribution p(x, y): rows are Alice's symbols, columns Bob's.
class ClassicalJoint {
 public:
  explicit ClassicalJoint(RealMatrix p);
  const RealMatrix& p() const { return p_; }
  std::size_t alice() const { return static_cast<std::size_t>(p_.rows()); }
  std::size_t bob() const { return static_cast<std::size_t>(p_.cols()); }
  RealVector bob_marginal() const { return p_.colwise().sum().transpose(); }
  // Appends zero rows up to m Alice symbols.
  ClassicalJoint padded(std::size_t m) const;

 private:
  RealMatrix p_;
};

/// Column-stochastic t_{w|z'}: row index w−1, column z'. An incomplete host
/// matrix has columns summing to at most 1; the missing mass is a round in
/// which the host allows no guess, so the player loses.
class HostMatrix {
 public:
  explicit HostMatrix(RealMatrix t, bool incomplete = false);
  const RealMatrix& t() const { return t_; }
  bool complete() const { return complete_; }
  std::size_t guesses() const { return static_cast<std::size_t>(t_.rows()); }
  std::size_t responses() const { return static_cast<std::size_t>(t_.cols()); }

  // Single column putting all mass on guess budget w.
  static HostMatrix fixed(std::size_t w, std::size_t n_w);

 private:
  RealMatrix t_;
  bool complete_ = true;
};

// max_{z'} Σ_w t_{w|z'} · prefix_sum(desc, w); the maximizing column goes to *arg.
double host_best_response(const HostMatrix& t, const RealVector& desc, std::size_t* arg = nullptr);

double prob_T(const ClassicalJoint& p, const HostMatrix& t);
double fixed_w_value(const ClassicalJoint& p, std::size_t w);

struct CdsCertificate {
  RealMatrix t;                // n × n', rows sum to 1
  std::vector<RealMatrix> d;  // block y·n' + w, doubly stochastic
};

struct ClassicalVerdict {
  bool majorizes;  // Q is reachable from P
  double residual;
  double infeasibility;
  std::optional<CdsCertificate> certificate;
  std::optional<HostMatrix> falsifier;  // game with prob_T(Q) > prob_T(P)
  double falsifier_gap = 0.0;
};

// Whether P conditionally majorizes Q, decided as LP feasibility. When the LP
// is infeasible a separating game is searched for: fixed-w games, then
// `falsify_trials` random host matrices (half of them incomplete), then a
// local search over incomplete host matrices. Complete host matrices alone
// cannot separate every infeasible pair.
ClassicalVerdict cond_majorizes_classical(const ClassicalJoint& p, const ClassicalJoint& q,
                                          std::size_t falsify_trials = 500, std::uint64_t seed = 0);

// Q = Σ_j E^(j) P R^(j).
ClassicalJoint apply_cds_classical(const ClassicalJoint& p, const std::vector<RealMatrix>& e,
                                   const std::vector<RealMatrix>& r);

DensityOperator embed_classical(const ClassicalJoint& p);
// Shannon H(X|Y) in bits.
double shannon_cond_entropy(const ClassicalJoint& p);

ClassicalJoint random_joint(std::size_t m, std::size_t n, Rng& rng);
// With `incomplete`, each column is scaled by a uniform factor in [0, 1].
HostMatrix random_host(std::size_t n_w, std::size_t n_z, Rng& rng, bool incomplete = false);

}  // namespace qce
