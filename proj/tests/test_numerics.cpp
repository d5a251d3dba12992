#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qent/numerics.hpp"

using namespace qent;

TEST_SUITE("numerics") {

TEST_CASE("kron of identities and Paulis") {
  CHECK(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)).isApprox(ComplexMatrix::Identity(4, 4)));

  const ComplexMatrix zz = kron(pauli::z(), pauli::z());
  Eigen::Vector4cd diag(1, -1, -1, 1);
  CHECK(oracle::max_abs_diff(zz, ComplexMatrix(diag.asDiagonal())) < 1e-15);

  ComplexVector ket00 = ComplexVector::Zero(4);
  ket00(0) = 1;
  const ComplexVector out = kron(pauli::x(), pauli::x()) * ket00;
  CHECK(std::abs(out(3) - Complex(1.0)) < 1e-15);
  CHECK(out.head(3).norm() < 1e-15);
}

TEST_CASE("kron agrees with the loop oracle on rectangular blocks") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  ComplexMatrix a(2, 3), b(3, 2);
  for (auto* m : {&a, &b})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = Complex(nd(rng), nd(rng));
  CHECK(oracle::max_abs_diff(kron(a, b), oracle::kron(a, b)) < 1e-14);
}

TEST_CASE("herm_eig on Pauli matrices") {
  const auto z = herm_eig(pauli::z());
  CHECK(z.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(z.eigenvalues(1) == doctest::Approx(1.0));

  const auto x = herm_eig(pauli::x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
  const ComplexVector minus = x.eigenvectors.col(0);
  const ComplexVector plus = x.eigenvectors.col(1);
  CHECK(std::abs(std::abs(minus(0) - minus(1)) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(minus(0) + minus(1)) < 1e-12);
  CHECK(std::abs(plus(0) - plus(1)) < 1e-12);
}

TEST_CASE("all-ones minus identity has spectrum (-1,-1,-1,3)") {
  const double g = 0.7;
  const ComplexMatrix j = g * (ComplexMatrix::Ones(4, 4) - ComplexMatrix::Identity(4, 4));
  const auto e = herm_eig(j);
  const auto ref = oracle::eigenvalues(j);
  for (int i = 0; i < 4; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
  CHECK(e.eigenvalues(0) == doctest::Approx(-g));
  CHECK(e.eigenvalues(2) == doctest::Approx(-g));
  CHECK(e.eigenvalues(3) == doctest::Approx(3 * g));
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(herm_eig(m), std::invalid_argument);
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("herm_eig reconstruction and unitarity on random matrices up to 32x32") {
  std::mt19937_64 rng(3);
  for (int d : {1, 2, 5, 8, 16, 32}) {
    CAPTURE(d);
    const ComplexMatrix h = oracle::random_hermitian(d, rng);
    const auto e = herm_eig(h);
    const ComplexMatrix& u = e.eigenvectors;
    const ComplexMatrix rec = u * e.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint();
    CHECK((rec - h).norm() < 1e-10);
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() < 1e-10);
    for (int i = 1; i < d; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
    const auto ref = oracle::eigenvalues(h);
    for (int i = 0; i < d; ++i) CHECK(std::abs(e.eigenvalues(i) - ref[static_cast<std::size_t>(i)]) < 1e-9);
  }
}

TEST_CASE("expm_unitary closed forms") {
  const ComplexMatrix u = expm_unitary(pauli::x(), oracle::kPi / 2);
  CHECK(oracle::max_abs_diff(u, Complex(0, -1) * ComplexMatrix(pauli::x())) < 1e-12);

  std::mt19937_64 rng(5);
  const ComplexMatrix h = oracle::random_hermitian(6, rng);
  CHECK(oracle::max_abs_diff(expm_unitary(h, 0.0), ComplexMatrix::Identity(6, 6)) < 1e-12);
}

TEST_CASE("expm_unitary group law, unitarity and Taylor oracle") {
  std::mt19937_64 rng(7);
  for (int d : {2, 4, 8, 16}) {
    const ComplexMatrix h = oracle::random_hermitian(d, rng);
    const double t = 0.37, s = 1.21;
    const ComplexMatrix ut = expm_unitary(h, t);
    CHECK((ut.adjoint() * ut - ComplexMatrix::Identity(d, d)).norm() < 1e-10);
    CHECK(oracle::max_abs_diff(ut * expm_unitary(h, s), expm_unitary(h, t + s)) < 1e-10);
    CHECK(oracle::max_abs_diff(ut, oracle::expm(h, t)) < 1e-10);
  }
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(ComplexMatrix::Identity(4, 4)) == doctest::Approx(4.0));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  CHECK(trace_norm(d) == doctest::Approx(2.0));
  CHECK_THROWS_AS(trace_norm(ComplexMatrix::Zero(2, 3)), std::invalid_argument);

  // Bell projector with qubit 0 transposed: spectrum {1/2, 1/2, 1/2, -1/2}.
  ComplexMatrix pt = ComplexMatrix::Zero(4, 4);
  pt(0, 0) = pt(3, 3) = 0.5;
  pt(1, 2) = pt(2, 1) = 0.5;
  const auto ev = oracle::eigenvalues(pt);
  CHECK(ev[0] == doctest::Approx(-0.5));
  CHECK(trace_norm(pt) == doctest::Approx(oracle::trace_norm_hermitian(pt)));
  CHECK(trace_norm(pt) == doctest::Approx(2.0));
}

TEST_CASE("trace_norm dominates |trace| for arbitrary square matrices") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 8;
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(nd(rng), nd(rng));
    CHECK(trace_norm(m) >= std::abs(m.trace()) - 1e-12);
  }
}

}
