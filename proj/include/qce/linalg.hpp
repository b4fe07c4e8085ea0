#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qce {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

namespace tol {
inline constexpr double structural = 1e-9;
inline constexpr double reconstruction = 1e-8;
inline constexpr double optimizer = 1e-6;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or subsystem layouts that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Inputs outside an operation's domain (bad parameter, not a state, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Solver breakdowns. Distinct from a negative answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

std::size_t product(const Dims& dims);

// Throws DomainError when any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);

/// A positive semidefinite, unit-trace operator on a tensor product of
/// subsystems. The leftmost entry of dims is the slowest-varying index.
class DensityOperator {
 public:
  DensityOperator(Dims dims, Matrix matrix);

  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  Dims dims_;
  Matrix matrix_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(const std::vector<Matrix>& factors);

// Partial trace keeping the listed subsystems (in ascending original order).
Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& keep);

// Reorders subsystems: output subsystem i is input subsystem order[i].
Matrix permute_subsystems(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& order);
// The unitary P with P (x_0 ⊗ ... ⊗ x_{n-1}) = x_{order[0]} ⊗ ... .
Matrix permutation_operator(const Dims& dims, const std::vector<std::size_t>& order);
Dims permute_dims(const Dims& dims, const std::vector<std::size_t>& order);

struct EigenSystem {
  RealVector values;  // descending; ties keep ascending solver index
  Matrix vectors;     // columns match values
};

EigenSystem eigh_desc(const Matrix& h);
RealVector eig_desc(const Matrix& h);

// Sum of the w largest entries of an already descending vector; w beyond the
// length saturates at the full sum.
double prefix_sum(const RealVector& desc, std::size_t w);

// Sum of the w largest singular values, 1 <= w <= min(rows, cols).
double kyfan(const Matrix& m, std::size_t w);

// True iff v majorizes u (descending prefix sums of v dominate those of u).
bool majorizes(const RealVector& v, const RealVector& u);

// Spectral purification onto the original systems followed by a reference
// of dimension rank(rho).
DensityOperator purify(const DensityOperator& rho);

// Frequently used states and operators.
Vector ket(std::size_t d, std::size_t i);
Matrix projector(const Vector& v);
Matrix basis_projector(std::size_t d, std::size_t i);
DensityOperator pure_state(const Dims& dims, const Vector& psi);
DensityOperator phi_plus(std::size_t d);
Matrix phi_plus_unnormalized(std::size_t d);
DensityOperator maximally_mixed(const Dims& dims);
DensityOperator product_state(const DensityOperator& a, const DensityOperator& b);
Matrix fourier_matrix(std::size_t d);
Matrix weyl_shift(std::size_t d);
Matrix weyl_clock(std::size_t d);

}  // namespace qce
