#include "qent/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qent {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

HermitianEig herm_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("herm_eig: matrix is not square (" + std::to_string(h.rows()) +
                                "x" + std::to_string(h.cols()) + ")");
  }
  if (!h.allFinite()) throw std::invalid_argument("herm_eig: non-finite entries");
  if (!is_hermitian(h)) throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix expm_unitary(const ComplexMatrix& h, double t) {
  const HermitianEig eig = herm_eig(h);
  const Eigen::Index n = h.rows();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::exp(Complex(0.0, -eig.eigenvalues(k) * t));
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("trace_norm: matrix is not square");
  if (is_hermitian(m)) return herm_eig(m).eigenvalues.cwiseAbs().sum();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double min_eigenvalue(const ComplexMatrix& h) { return herm_eig(h).eigenvalues(0); }

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}
Matrix2c y() {
  Matrix2c m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix2c z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}
Matrix2c hadamard() {
  Matrix2c m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}
}  // namespace pauli

}  // namespace qent
