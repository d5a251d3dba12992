#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr double kKernelTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend and the
/// columns of `eigenvectors` form a unitary basis.
struct HermitianEig {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tol = kKernelTol);

/// Throws std::invalid_argument when `h` is not square or not Hermitian
/// within 1e-10 (scaled by the largest entry when that exceeds one).
HermitianEig herm_eig(const ComplexMatrix& h);

/// exp(-i h t) for Hermitian h.
ComplexMatrix expm_unitary(const ComplexMatrix& h, double t);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& h);

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
Matrix2c hadamard();
}  // namespace pauli

}  // namespace qent
