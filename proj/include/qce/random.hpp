#pragma once

#include <cstdint>
#include <random>

#include "qce/linalg.hpp"

namespace qce {

// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed, 0)) {}

  // Independent generator for substream k; does not advance this one.
  Rng split(std::uint64_t k) const { return Rng(mix_seed(seed_, k + 1)); }

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cplx complex_normal() { return {normal(), normal()}; }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

  // Draws an index from a (not necessarily normalized) nonnegative weight vector.
  std::size_t categorical(const RealVector& weights);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

Matrix haar_unitary(std::size_t d, Rng& rng);
// Haar-random isometry with the given column count (rows >= cols).
Matrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng);
Vector random_pure(std::size_t d, Rng& rng);
// Partial trace of a Haar-random pure state on dims ⊗ C^rank.
DensityOperator random_density(const Dims& dims, std::size_t rank, Rng& rng);
DensityOperator random_density(const Dims& dims, Rng& rng);
// Uniform on the simplex.
RealVector random_pmf(std::size_t n, Rng& rng);
RealMatrix random_column_stochastic(std::size_t rows, std::size_t cols, Rng& rng);
// Convex mixture of random permutation matrices.
RealMatrix random_doubly_stochastic(std::size_t n, std::size_t terms, Rng& rng);
// Mixture of at most `terms` random product pure states.
DensityOperator random_separable(std::size_t da, std::size_t db, std::size_t terms, Rng& rng);

}  // namespace qce
