#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qent/qstate.hpp"
#include "qent/states.hpp"

namespace qent::circuits {

enum class Axis { x, y, z };

/// R_a(theta) = exp(-i theta sigma_a / 2) on `target`.
struct Rotation {
  Axis axis;
  double angle;
  int target;
};

/// XY evolution of the pair (i, j) for gt = pi/2.
struct ISwap {
  int i;
  int j;
};

struct XYEvolve {
  std::vector<std::pair<int, int>> pairs;
  double gt;
};

/// Applied as given; the outcome is renormalized and the norm^2 reported.
struct Filter {
  Matrix2c matrix;
  int target;
};

/// sigma_x on `target`.
struct Excite {
  int target;
};

using GateOp = std::variant<Rotation, ISwap, XYEvolve, Filter, Excite>;

Matrix2c rotation_matrix(Axis axis, double angle);

/// Unnormalized action of a single-qubit operator on qubit `target` of an n-qubit vector.
ComplexVector apply_local(const Matrix2c& m, int target, const ComplexVector& v, int n);

struct Applied {
  PureState state;
  double probability;
};

/// Throws std::invalid_argument for out-of-range targets and std::domain_error
/// ("filtered to zero") when a filter leaves a norm below 1e-12.
Applied apply(const GateOp& op, const PureState& s);

std::string describe(const GateOp& op);

Matrix2c filter_plus();
Matrix2c filter_minus();
/// One filter per qubit of a 3-qubit register.
std::array<GateOp, 3> g3_filters(states::Sign sign);

struct Step {
  std::string label;
  PureState state;
};

struct RecipeResult {
  explicit RecipeResult(PureState s) : final(std::move(s)) {}

  std::string name;
  std::string target;  ///< catalog name of the intended state
  PureState final;
  /// Product of filter norms^2 with filters applied as given.
  double success_probability = 1.0;
  /// The same with each filter rescaled to unit operator norm.
  double kraus_probability = 1.0;
  std::vector<Step> log;
  std::map<std::string, double> observables;
};

/// Runs `ops` from `initial`, logging the state after every step.
RecipeResult run(const PureState& initial, const std::vector<GateOp>& ops);

const std::vector<std::string>& recipe_names();
bool is_recipe(std::string_view name);

/// ghz3, ghz4, w3, w3_peak2, w4, chi4, g3_attempt, singlet4.
RecipeResult recipe(std::string_view name);

/// First gt > 0 where |C_0011| = |C_1100| under complete-graph evolution of |0011>.
double singlet_peak_gt();

}  // namespace qent::circuits
