#pragma once

#include <cstdint>
#include <vector>

#include "qent/numerics.hpp"

namespace qent {

// Basis index convention: ket |q0 q1 ... q(n-1)> maps to the integer whose most
// significant bit is qubit 0. Qubit subsets are bitmasks with bit q = qubit q.

inline constexpr int kMaxQubits = 5;
inline constexpr double kStateTol = 1e-9;

inline int basis_bit(int n, int qubit) { return n - 1 - qubit; }
inline int qubit_value(std::size_t index, int n, int qubit) {
  return static_cast<int>((index >> basis_bit(n, qubit)) & 1U);
}

class PureState {
 public:
  /// Throws std::invalid_argument unless amplitudes has 2^n entries with unit norm.
  PureState(int n, ComplexVector amplitudes);

  /// Rescales to unit norm; throws if the vector is (numerically) zero.
  static PureState normalized(int n, const ComplexVector& amplitudes);
  static PureState basis(int n, std::size_t index);

  int qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  int n_;
  ComplexVector amps_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (all within 1e-9); never repairs.
  DensityMatrix(int n, ComplexMatrix matrix);

  int qubits() const { return n_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  int n_;
  ComplexMatrix m_;
};

/// Side A of a two-way split of n qubits.
class Bipartition {
 public:
  Bipartition(int n, std::uint32_t subset);

  int qubits() const { return n_; }
  std::uint32_t subset() const { return subset_; }
  std::uint32_t complement() const { return ((1U << n_) - 1U) & ~subset_; }
  /// Same split, written with qubit 0 on side A.
  Bipartition canonical() const;
  bool operator==(const Bipartition&) const = default;

 private:
  int n_;
  std::uint32_t subset_;
};

DensityMatrix density_of(const PureState& s);

/// Reduced state on the qubits in `keep`; their relative order is preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, std::uint32_t keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, int n, std::uint32_t keep);

ComplexMatrix partial_transpose(const ComplexMatrix& m, int n, std::uint32_t subset);
ComplexMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& part);

double fidelity(const PureState& a, const PureState& b);

struct PhaseMatch {
  double value = 0.0;
  /// Per-qubit relative phases applied to |1>, each in (-pi, pi].
  std::vector<double> phases;
};

/// max over gamma of |<a| Z(gamma_0) x ... x Z(gamma_{n-1}) |b>|^2. 16-point grid per
/// angle followed by exact coordinate ascent from the best grid points.
PhaseMatch local_phase_match(const PureState& a, const PureState& b);

/// Applies diag(1, e^{i gamma_q}) on every qubit q.
PureState apply_local_phases(const PureState& s, const std::vector<double>& phases);

/// Basis indices grouped by excitation number 0..n.
std::vector<std::vector<std::size_t>> excitation_sets(int n);

int popcount(std::size_t v);

}  // namespace qent
