#include "qent/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qent {
namespace {

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits) +
                                ", got " + std::to_string(n));
  }
}

double wrap_phase(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x <= -std::numbers::pi ? x + 2.0 * std::numbers::pi : x;
}

}  // namespace

int popcount(std::size_t v) { return std::popcount(v); }

PureState::PureState(int n, ComplexVector amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  check_qubits(n);
  if (amps_.size() != (Eigen::Index{1} << n)) {
    throw std::invalid_argument("expected " + std::to_string(1 << n) + " amplitudes, got " +
                                std::to_string(amps_.size()));
  }
  if (!amps_.allFinite()) throw std::invalid_argument("non-finite amplitude");
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kStateTol) {
    throw std::invalid_argument("state is not normalized (norm^2 = " + std::to_string(norm2) + ")");
  }
}

PureState PureState::normalized(int n, const ComplexVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 1e-300)) throw std::invalid_argument("cannot normalize a zero vector");
  return PureState(n, amplitudes / norm);
}

PureState PureState::basis(int n, std::size_t index) {
  check_qubits(n);
  if (index >= (std::size_t{1} << n)) throw std::invalid_argument("basis index out of range");
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(n, std::move(v));
}

DensityMatrix::DensityMatrix(int n, ComplexMatrix matrix) : n_(n), m_(std::move(matrix)) {
  check_qubits(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("density matrix must be " + std::to_string(d) + "x" +
                                std::to_string(d));
  }
  if (!m_.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kStateTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw std::invalid_argument("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
  }
  const ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
  if (min_eigenvalue(sym) < -kStateTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

Bipartition::Bipartition(int n, std::uint32_t subset) : n_(n), subset_(subset) {
  check_qubits(n);
  const std::uint32_t all = (1U << n) - 1U;
  if ((subset & ~all) != 0 || subset == 0 || subset == all) {
    throw std::invalid_argument("bipartition side must be a nonempty proper qubit subset");
  }
}

Bipartition Bipartition::canonical() const {
  return (subset_ & 1U) ? *this : Bipartition(n_, complement());
}

DensityMatrix density_of(const PureState& s) {
  return DensityMatrix(s.qubits(), s.amplitudes() * s.amplitudes().adjoint());
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int n, std::uint32_t keep) {
  const std::uint32_t all = (1U << n) - 1U;
  keep &= all;
  if (keep == 0) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> kept, traced;
  for (int q = 0; q < n; ++q) ((keep >> q) & 1U ? kept : traced).push_back(q);
  const int nk = static_cast<int>(kept.size());
  const std::size_t dk = std::size_t{1} << nk;
  const std::size_t dt = std::size_t{1} << traced.size();

  // Full index from (kept bits, traced bits), each ordered by qubit.
  auto compose = [&](std::size_t k, std::size_t t) {
    std::size_t idx = 0;
    for (int i = 0; i < nk; ++i) {
      if ((k >> (nk - 1 - i)) & 1U) idx |= std::size_t{1} << basis_bit(n, kept[i]);
    }
    const int nt = static_cast<int>(traced.size());
    for (int i = 0; i < nt; ++i) {
      if ((t >> (nt - 1 - i)) & 1U) idx |= std::size_t{1} << basis_bit(n, traced[i]);
    }
    return static_cast<Eigen::Index>(idx);
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) acc += m(compose(a, t), compose(b, t));
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::uint32_t keep) {
  const std::uint32_t masked = keep & ((1U << rho.qubits()) - 1U);
  if (masked == 0) throw std::invalid_argument("partial_trace: keep set is empty");
  return DensityMatrix(std::popcount(masked), partial_trace(rho.matrix(), rho.qubits(), masked));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int n, std::uint32_t subset) {
  std::size_t bits = 0;
  for (int q = 0; q < n; ++q) {
    if ((subset >> q) & 1U) bits |= std::size_t{1} << basis_bit(n, q);
  }
  const Eigen::Index d = m.rows();
  ComplexMatrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const std::size_t ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const std::size_t a2 = (ua & ~bits) | (ub & bits);
      const std::size_t b2 = (ub & ~bits) | (ua & bits);
      out(a, b) = m(static_cast<Eigen::Index>(a2), static_cast<Eigen::Index>(b2));
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part) {
  if (part.qubits() != rho.qubits()) throw std::invalid_argument("bipartition size mismatch");
  return partial_transpose(rho.matrix(), rho.qubits(), part.subset());
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("fidelity: qubit count mismatch");
  return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

PureState apply_local_phases(const PureState& s, const std::vector<double>& phases) {
  const int n = s.qubits();
  ComplexVector v = s.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double angle = 0.0;
    for (int q = 0; q < n; ++q) {
      if (qubit_value(static_cast<std::size_t>(i), n, q)) angle += phases.at(q);
    }
    v(i) *= std::polar(1.0, angle);
  }
  return PureState(n, std::move(v));
}

PhaseMatch local_phase_match(const PureState& a, const PureState& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("local_phase_match: qubit count mismatch");
  const int n = a.qubits();
  const std::size_t d = a.dim();
  // Overlap terms conj(a_i) b_i; the objective is |sum_i c_i exp(i sum_q gamma_q bit_q(i))|^2.
  std::vector<Complex> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = std::conj(a[i]) * b[i];

  auto objective = [&](const std::vector<double>& g) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double angle = 0.0;
      for (int q = 0; q < n; ++q) {
        if (qubit_value(i, n, q)) angle += g[q];
      }
      acc += c[i] * std::polar(1.0, angle);
    }
    return std::norm(acc);
  };

  constexpr int kGrid = 16;
  constexpr std::size_t kStarts = 4;
  std::vector<std::pair<double, std::vector<double>>> best;
  std::vector<int> counter(n, 0);
  std::vector<double> g(n, 0.0);
  const std::size_t total = static_cast<std::size_t>(std::pow(kGrid, n));
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (int q = n - 1; q >= 0; --q) {
      g[q] = 2.0 * std::numbers::pi * static_cast<double>(rem % kGrid) / kGrid;
      rem /= kGrid;
    }
    const double v = objective(g);
    if (best.size() < kStarts || v > best.back().first + 1e-15) {
      best.emplace_back(v, g);
      std::stable_sort(best.begin(), best.end(),
                       [](const auto& x, const auto& y) { return x.first > y.first; });
      if (best.size() > kStarts) best.pop_back();
    }
  }

  PhaseMatch out;
  out.value = -1.0;
  for (auto& [value, phases] : best) {
    // Exact coordinate ascent: for fixed other phases the objective is |A + B e^{i gamma_q}|^2.
    for (int sweep = 0; sweep < 2000; ++sweep) {
      const double before = value;
      for (int q = 0; q < n; ++q) {
        Complex A = 0.0, B = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double angle = 0.0;
          for (int r = 0; r < n; ++r) {
            if (r != q && qubit_value(i, n, r)) angle += phases[r];
          }
          (qubit_value(i, n, q) ? B : A) += c[i] * std::polar(1.0, angle);
        }
        if (std::abs(A) > 1e-300 && std::abs(B) > 1e-300) phases[q] = std::arg(A) - std::arg(B);
      }
      value = objective(phases);
      if (value - before < 1e-16) break;
    }
    if (value > out.value) {
      out.value = value;
      out.phases = phases;
    }
  }
  for (double& p : out.phases) p = wrap_phase(p);
  out.value = std::min(1.0, std::max(out.value, 0.0));
  return out;
}

std::vector<std::vector<std::size_t>> excitation_sets(int n) {
  if (n < 1) throw std::invalid_argument("excitation_sets: n must be positive");
  std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) sets[std::popcount(i)].push_back(i);
  return sets;
}

}  // namespace qent
