#pragma once

// Reference implementations used only to cross-check the library. They are
// deliberately naive: explicit index loops, cyclic Jacobi, truncated Taylor series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qent/numerics.hpp"
#include "qent/qstate.hpp"

namespace oracle {

using qent::Complex;
using qent::ComplexMatrix;
using qent::ComplexVector;

inline constexpr double kPi = 3.14159265358979323846;

/// Cyclic Jacobi on a dense real symmetric matrix (row-major), eigenvalues ascending.
inline std::vector<double> jacobi_symmetric(std::vector<double> a, int n) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Spectrum of a Hermitian matrix through its real 2d x 2d embedding, whose
/// eigenvalues are those of h, each twice.
inline std::vector<double> eigenvalues(const ComplexMatrix& h) {
  const int d = static_cast<int>(h.rows());
  const int m = 2 * d;
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double re = h(i, j).real(), im = h(i, j).imag();
      a[static_cast<std::size_t>(i) * m + j] = re;
      a[static_cast<std::size_t>(i) * m + j + d] = -im;
      a[static_cast<std::size_t>(i + d) * m + j] = im;
      a[static_cast<std::size_t>(i + d) * m + j + d] = re;
    }
  }
  const auto doubled = jacobi_symmetric(a, m);
  std::vector<double> ev;
  for (int i = 0; i < m; i += 2) ev.push_back(0.5 * (doubled[static_cast<std::size_t>(i)] + doubled[static_cast<std::size_t>(i) + 1]));
  return ev;
}

inline double trace_norm_hermitian(const ComplexMatrix& h) {
  double s = 0.0;
  for (double v : eigenvalues(h)) s += std::abs(v);
  return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
  return k;
}

/// Bits of basis index `i` as a vector, qubit 0 first.
inline std::vector<int> bits(std::size_t i, int n) {
  std::vector<int> b(static_cast<std::size_t>(n));
  for (int q = n - 1; q >= 0; --q) {
    b[static_cast<std::size_t>(q)] = static_cast<int>(i & 1U);
    i >>= 1;
  }
  return b;
}

inline std::size_t index(const std::vector<int>& b) {
  std::size_t i = 0;
  for (int v : b) i = (i << 1) | static_cast<std::size_t>(v);
  return i;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int n, std::uint32_t subset) {
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      auto br = bits(r, n), bc = bits(c, n);
      for (int q = 0; q < n; ++q) {
        if ((subset >> q) & 1U) std::swap(br[static_cast<std::size_t>(q)], bc[static_cast<std::size_t>(q)]);
      }
      out(static_cast<Eigen::Index>(index(br)), static_cast<Eigen::Index>(index(bc))) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, int n, std::uint32_t keep) {
  std::vector<int> kept;
  for (int q = 0; q < n; ++q) {
    if ((keep >> q) & 1U) kept.push_back(q);
  }
  const std::size_t d = std::size_t{1} << n;
  const Eigen::Index dk = Eigen::Index{1} << kept.size();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const auto br = bits(r, n), bc = bits(c, n);
      bool diag = true;
      for (int q = 0; q < n; ++q) {
        if (!((keep >> q) & 1U) && br[static_cast<std::size_t>(q)] != bc[static_cast<std::size_t>(q)]) diag = false;
      }
      if (!diag) continue;
      std::vector<int> kr, kc;
      for (int q : kept) {
        kr.push_back(br[static_cast<std::size_t>(q)]);
        kc.push_back(bc[static_cast<std::size_t>(q)]);
      }
      out(static_cast<Eigen::Index>(index(kr)), static_cast<Eigen::Index>(index(kc))) +=
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

/// exp(-i h t) by scaling and squaring a degree-30 Taylor polynomial.
inline ComplexMatrix expm(const ComplexMatrix& h, double t) {
  const Eigen::Index d = h.rows();
  ComplexMatrix a = Complex(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  a /= std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(d, d);
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// (g/2)(XX + YY) summed over pairs, assembled from explicit Kronecker products.
inline ComplexMatrix xy_hamiltonian(int n, const std::vector<std::pair<int, int>>& pairs, double g) {
  ComplexMatrix x(2, 2), y(2, 2), id = ComplexMatrix::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (const auto& [i, j] : pairs) {
    ComplexMatrix xx = ComplexMatrix::Identity(1, 1), yy = xx;
    for (int q = 0; q < n; ++q) {
      xx = kron(xx, q == i || q == j ? x : id);
      yy = kron(yy, q == i || q == j ? y : id);
    }
    h += 0.5 * g * (xx + yy);
  }
  return h;
}

inline ComplexMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

inline ComplexVector random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(nd(rng), nd(rng));
  return v.normalized();
}

inline qent::PureState random_state(int n, std::mt19937_64& rng) {
  return qent::PureState(n, random_vector(1 << n, rng));
}

/// Full-rank density matrix A A^dag / tr.
inline qent::DensityMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int d = 1 << n;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return qent::DensityMatrix(n, 0.5 * (rho + rho.adjoint()));
}

/// Haar-ish 2x2 unitary from Euler angles.
inline ComplexMatrix random_unitary2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const double a = u(rng), b = u(rng), c = u(rng), th = u(rng) / 2.0;
  ComplexMatrix m(2, 2);
  m << std::polar(std::cos(th), a), std::polar(std::sin(th), b), -std::polar(std::sin(th), -b),
      std::polar(std::cos(th), -a);
  return std::polar(1.0, c) * m;
}

inline ComplexMatrix random_local_unitary(int n, std::mt19937_64& rng) {
  ComplexMatrix u = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) u = kron(u, random_unitary2(rng));
  return u;
}

/// max over per-qubit phases of |<a| diag phases |b>|^2 on a uniform grid, by exhaustive search.
inline double phase_grid_max(const qent::PureState& a, const qent::PureState& b, int steps) {
  const int n = a.qubits();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = 0.0;
  for (;;) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      double phase = 0.0;
      for (int q = 0; q < n; ++q) {
        if (qent::qubit_value(i, n, q)) phase += 2.0 * kPi * idx[static_cast<std::size_t>(q)] / steps;
      }
      s += std::conj(a[i]) * std::polar(1.0, phase) * b[i];
    }
    best = std::max(best, std::norm(s));
    int q = 0;
    while (q < n && ++idx[static_cast<std::size_t>(q)] == steps) idx[static_cast<std::size_t>(q++)] = 0;
    if (q == n) break;
  }
  return best;
}

inline double negativity(const ComplexMatrix& rho, int n, std::uint32_t subset) {
  return 0.5 * (trace_norm_hermitian(partial_transpose(rho, n, subset)) - 1.0);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
