#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "qent/qstate.hpp"

namespace qent {

/// Sum over coupled pairs of (g/2)(X_i X_j + Y_i Y_j), hbar = 1.
class XYHamiltonian {
 public:
  XYHamiltonian(int n, std::vector<std::pair<int, int>> pairs, double g = 1.0);

  int qubits() const { return n_; }
  double coupling() const { return g_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  /// Full 2^n x 2^n operator assembled from Pauli products.
  ComplexMatrix matrix() const;
  /// Restriction to the kets in `basis`, built from the hopping form g(s+ s- + s- s+).
  ComplexMatrix block(const std::vector<std::size_t>& basis) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
  double g_;
};

XYHamiltonian pairwise(int n, int i, int j, double g = 1.0);
XYHamiltonian complete_graph(int n, double g = 1.0);

/// exp(-i H t) s with t = gt / g, evaluated blockwise per excitation number.
PureState evolve(const XYHamiltonian& h, const PureState& s, double gt);

struct Grid {
  double start = 0.0;
  double stop = 3.2;
  double step = 0.01;

  /// start + k*step for k = 0.. while <= stop (1e-9 slack). Throws on step <= 0 or stop < start.
  std::vector<double> points() const;
};

struct SweepRecord {
  double gt;
  PureState state;
  std::optional<double> gme_value;
};

using StateMetric = std::function<double(const PureState&)>;

/// Evolves s0 to each grid point. When `metric` is set it is evaluated per point,
/// on up to `threads` worker threads (0 = hardware concurrency); output order follows the grid.
std::vector<SweepRecord> sweep(const XYHamiltonian& h, const PureState& s0,
                               const std::vector<double>& gt_grid,
                               const StateMetric& metric = {}, unsigned threads = 1);

/// "gt,E" header then one row per record, 6 decimals.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace qent
