#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qent/numerics.hpp"

/// Small dense semidefinite programs over Hermitian matrix variables.
///
/// A problem is
///
///     minimize    sum_v Re tr(C_v^dag X_v)
///     subject to  sum_v L_vk(X_v) = B_k          (matrix-valued equalities)
///                 sum_v Re tr(A_vk^dag X_v) = b_k  (scalar equalities)
///                 X_v >= 0, 0 <= X_v <= I, X_v <= I, or X_v free
///
/// where each L_vk is +/- the identity or +/- a partial transpose over a fixed
/// qubit subset. Variables may be restricted to real symmetric matrices.
namespace qent::sdp {

enum class Bound {
  free,   ///< no semidefinite constraint
  psd,    ///< X >= 0
  box,    ///< 0 <= X <= I
  upper,  ///< X <= I
};

struct Variable {
  std::string name;
  int dim = 1;
  Bound bound = Bound::psd;
  bool real = false;
};

struct LinearMap {
  enum class Kind { identity, partial_transpose };
  Kind kind = Kind::identity;
  int qubits = 0;             ///< dim == 2^qubits for partial transposes
  std::uint32_t subset = 0;   ///< transposed qubits (bit q = qubit q, qubit 0 most significant)
  double scale = 1.0;         ///< +1 or -1

  static LinearMap identity(double scale = 1.0) { return {Kind::identity, 0, 0, scale}; }
  static LinearMap transpose(int qubits, std::uint32_t subset, double scale = 1.0) {
    return {Kind::partial_transpose, qubits, subset, scale};
  }
};

ComplexMatrix apply(const LinearMap& map, const ComplexMatrix& x);

struct MatrixTerm {
  std::size_t var;
  LinearMap map;
};

struct MatrixEquality {
  std::vector<MatrixTerm> terms;
  ComplexMatrix rhs;
};

struct ScalarTerm {
  std::size_t var;
  ComplexMatrix coeff;
};

struct ScalarEquality {
  std::vector<ScalarTerm> terms;
  double rhs = 0.0;
};

struct Problem {
  std::vector<Variable> variables;
  /// Per variable; an empty matrix means a zero cost.
  std::vector<ComplexMatrix> objective;
  std::vector<MatrixEquality> matrix_equalities;
  std::vector<ScalarEquality> scalar_equalities;

  std::size_t add_variable(std::string name, int dim, Bound bound, bool real = false);
};

enum class Status { optimal, infeasible, max_iterations };

const char* to_string(Status s);

struct IterationLog {
  int iteration;
  double primal_objective;
  double dual_objective;
  double mu;
  double primal_residual;
  double dual_residual;
  double primal_step;
  double dual_step;
};

struct Solution {
  Status status = Status::max_iterations;
  double objective_value = 0.0;  ///< primal objective
  double dual_value = 0.0;
  std::vector<ComplexMatrix> values;
  double primal_residual = 0.0;  ///< relative, ||b - A x|| / (1 + ||b||)
  double dual_residual = 0.0;    ///< relative
  double gap = 0.0;              ///< |primal - dual| / (1 + |primal| + |dual|)
  int iterations = 0;
  std::vector<IterationLog> history;
};

struct Options {
  double tol = 1e-7;
  int max_iter = 500;
  bool verbose = false;
};

/// Throws std::invalid_argument for malformed problems (dimension mismatches,
/// non-Hermitian data, free variables that appear in no equality).
Solution solve(const Problem& problem, const Options& options = {});

/// Independent re-check of a candidate point: bound violations measured with
/// fresh eigensolves and absolute equality residuals.
struct Certificate {
  double bound_violation = 0.0;     ///< max over variables of eigenvalue excursion outside the bounds
  double equality_residual = 0.0;   ///< max absolute entry of any equality residual
};

Certificate certify(const Problem& problem, const std::vector<ComplexMatrix>& values);

/// Rewrites every Hermitian d x d variable as a real symmetric 2d x 2d variable
/// [[Re X, -Im X], [Im X, Re X]]; partial-transpose subsets shift by one qubit.
/// The optimal value is unchanged.
Problem real_embedding(const Problem& problem);

}  // namespace qent::sdp
