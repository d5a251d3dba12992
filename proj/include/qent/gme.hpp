#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qent/qstate.hpp"
#include "qent/sdp.hpp"

namespace qent {

/// All two-way splits of n qubits with qubit 0 on side A.
struct BipartitionList {
  int n = 0;
  std::vector<Bipartition> items;
};

BipartitionList bipartitions(int n);

struct SolverStats {
  sdp::Status status = sdp::Status::max_iterations;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct GmeResult {
  double value = 0.0;
  ComplexMatrix witness;
  /// (P_M, Q_M) in the order of bipartitions(n).items.
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> decompositions;
  double objective = 0.0;  ///< Re tr(W rho)
  SolverStats solver_stats;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(sdp::Status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  sdp::Status status() const { return status_; }

 private:
  sdp::Status status_;
};

/// The witness program over all bipartitions, with W as variable 0 and
/// (P_M, Q_M) as variables 1 + 2k, 2 + 2k.
sdp::Problem gme_problem(const DensityMatrix& rho);

/// Throws SolverError when the solver does not reach optimality.
GmeResult genuine_negativity(const DensityMatrix& rho, const sdp::Options& options = {});
GmeResult genuine_negativity(const PureState& psi, const sdp::Options& options = {});

double bipartite_negativity(const DensityMatrix& rho, const Bipartition& m);
bool is_ppt(const DensityMatrix& rho, const Bipartition& m);

DensityMatrix random_biseparable(int n, std::uint64_t seed);

}  // namespace qent
