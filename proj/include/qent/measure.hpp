#pragma once

#include <array>
#include <string>
#include <vector>

#include "qent/qstate.hpp"

namespace qent {

/// Rank-one projection V |o><o| V^dag on one qubit, V = t I + i (y1 X + y2 Y + y3 Z).
struct ProjectiveMeasurement {
  int qubit = 0;
  std::array<double, 4> v_params{1.0, 0.0, 0.0, 0.0};  ///< (t, y1, y2, y3)
  int outcome = 0;

  /// Throws std::invalid_argument unless the parameters have unit norm within 1e-9.
  void validate() const;
  Matrix2c v() const;
  /// V |outcome>.
  Eigen::Vector2cd direction() const;
};

/// (t, y) from the angles t = cos psi, y = sin psi (cos th, sin th cos ph, sin th sin ph).
std::array<double, 4> su2_params(double psi, double theta, double phi);

struct Projected {
  PureState state;
  double probability;
};

/// Applies the projector, traces out the measured qubit and renormalizes.
/// Throws std::domain_error ("outcome impossible") below probability 1e-12.
Projected project(const PureState& s, const ProjectiveMeasurement& m);

struct ProjectedMixed {
  DensityMatrix state;
  double probability;
};

ProjectedMixed project(const DensityMatrix& rho, const ProjectiveMeasurement& m);

enum class EntanglementClass { product, biseparable, w_class, ghz_class };

const char* to_string(EntanglementClass c);

/// 4 |d1 - 2 d2 + 4 d3| for a 3-qubit pure state.
double three_tangle(const PureState& s);

/// Requires a 3-qubit state.
EntanglementClass classify3(const PureState& s);

enum class TargetFamily { w_span, w_ghz_tilde_span, ghz_family };

const char* to_string(TargetFamily f);

/// Orthonormal basis spanning the family.
std::vector<PureState> family_basis(TargetFamily f);

struct MappingResult {
  std::string input_name;
  ProjectiveMeasurement measurement;
  PureState output;
  double probability = 0.0;
  /// Overlaps <f_k | output> with the declared family members, in family order.
  std::vector<Complex> coefficients;
  double span_overlap = 0.0;
  EntanglementClass class_label = EntanglementClass::product;
};

struct SearchOptions {
  int grid = 20;                 ///< points per angle
  double min_overlap = 1.0 - 1e-6;
  double min_probability = 1e-6;
  bool refine = true;
};

/// Grid over (psi, theta, phi) and both outcomes, refined by pattern search where
/// the span overlap falls short. Results are ordered by grid index, then outcome.
std::vector<MappingResult> search_mapping(const PureState& s4, int qubit, TargetFamily target,
                                          const std::string& input_name = "",
                                          const SearchOptions& options = {});

}  // namespace qent
