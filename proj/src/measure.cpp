#include "qent/measure.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qent/states.hpp"

namespace qent {
namespace {

constexpr double kImpossible = 1e-12;
constexpr double kSplitTol = 1e-7;
constexpr double kTangleTol = 1e-8;

// <v|_q as a map from n to n-1 qubits.
ComplexMatrix contraction(int n, int qubit, const Eigen::Vector2cd& v) {
  const std::size_t dim = std::size_t{1} << n;
  const int bit = basis_bit(n, qubit);
  ComplexMatrix k = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim / 2), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t hi = (i >> (bit + 1)) << bit;
    const std::size_t lo = i & ((std::size_t{1} << bit) - 1);
    k(static_cast<Eigen::Index>(hi | lo), static_cast<Eigen::Index>(i)) = std::conj(v(qubit_value(i, n, qubit)));
  }
  return k;
}

double split_negativity(const PureState& s, std::uint32_t subset) {
  const ComplexMatrix rho = density_of(s).matrix();
  return 0.5 * (trace_norm(partial_transpose(rho, s.qubits(), subset)) - 1.0);
}

}  // namespace

void ProjectiveMeasurement::validate() const {
  double norm = 0.0;
  for (double p : v_params) norm += p * p;
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("measurement parameters must have unit norm");
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("measurement outcome must be 0 or 1");
}

Matrix2c ProjectiveMeasurement::v() const {
  const Complex i(0.0, 1.0);
  return v_params[0] * pauli::identity() +
         i * (v_params[1] * pauli::x() + v_params[2] * pauli::y() + v_params[3] * pauli::z());
}

Eigen::Vector2cd ProjectiveMeasurement::direction() const { return v().col(outcome); }

std::array<double, 4> su2_params(double psi, double theta, double phi) {
  const double s = std::sin(psi);
  return {std::cos(psi), s * std::cos(theta), s * std::sin(theta) * std::cos(phi),
          s * std::sin(theta) * std::sin(phi)};
}

Projected project(const PureState& s, const ProjectiveMeasurement& m) {
  m.validate();
  const int n = s.qubits();
  if (n < 2) throw std::invalid_argument("project: need at least two qubits");
  if (m.qubit < 0 || m.qubit >= n) throw std::invalid_argument("project: qubit out of range");
  const ComplexVector chi = contraction(n, m.qubit, m.direction()) * s.amplitudes();
  const double p = chi.squaredNorm();
  if (p < kImpossible) throw std::domain_error("outcome impossible");
  return {PureState(n - 1, chi / std::sqrt(p)), p};
}

ProjectedMixed project(const DensityMatrix& rho, const ProjectiveMeasurement& m) {
  m.validate();
  const int n = rho.qubits();
  if (n < 2) throw std::invalid_argument("project: need at least two qubits");
  if (m.qubit < 0 || m.qubit >= n) throw std::invalid_argument("project: qubit out of range");
  const ComplexMatrix k = contraction(n, m.qubit, m.direction());
  ComplexMatrix out = k * rho.matrix() * k.adjoint();
  const double p = out.trace().real();
  if (p < kImpossible) throw std::domain_error("outcome impossible");
  out /= p;
  return {DensityMatrix(n - 1, 0.5 * (out + out.adjoint())), p};
}

const char* to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::product: return "product";
    case EntanglementClass::biseparable: return "biseparable";
    case EntanglementClass::w_class: return "W-class";
    case EntanglementClass::ghz_class: return "GHZ-class";
  }
  return "unknown";
}

double three_tangle(const PureState& s) {
  if (s.qubits() != 3) throw std::invalid_argument("three_tangle: need a 3-qubit state");
  auto a = [&](int i) { return s[static_cast<std::size_t>(i)]; };
  const Complex d1 = a(0) * a(0) * a(7) * a(7) + a(1) * a(1) * a(6) * a(6) + a(2) * a(2) * a(5) * a(5) +
                     a(4) * a(4) * a(3) * a(3);
  const Complex d2 = a(0) * a(7) * a(3) * a(4) + a(0) * a(7) * a(5) * a(2) + a(0) * a(7) * a(6) * a(1) +
                     a(3) * a(4) * a(5) * a(2) + a(3) * a(4) * a(6) * a(1) + a(5) * a(2) * a(6) * a(1);
  const Complex d3 = a(0) * a(6) * a(5) * a(3) + a(7) * a(1) * a(2) * a(4);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

EntanglementClass classify3(const PureState& s) {
  if (s.qubits() != 3) throw std::invalid_argument("classify3: need a 3-qubit state");
  int zero = 0;
  for (std::uint32_t q = 0; q < 3; ++q) {
    if (split_negativity(s, 1U << q) < kSplitTol) ++zero;
  }
  if (zero == 3) return EntanglementClass::product;
  if (zero >= 1) return EntanglementClass::biseparable;
  return three_tangle(s) > kTangleTol ? EntanglementClass::ghz_class : EntanglementClass::w_class;
}

const char* to_string(TargetFamily f) {
  switch (f) {
    case TargetFamily::w_span: return "W3,Wt3";
    case TargetFamily::w_ghz_tilde_span: return "W3,GHZt3";
    case TargetFamily::ghz_family: return "GHZ3 family";
  }
  return "unknown";
}

std::vector<PureState> family_basis(TargetFamily f) {
  switch (f) {
    case TargetFamily::w_span: return {states::w(3), states::w_tilde(3)};
    case TargetFamily::w_ghz_tilde_span: return {states::w(3), states::ghz_tilde3()};
    case TargetFamily::ghz_family:
      return {states::from_kets({{"000", 1.0}, {"111", 1.0}}), states::from_kets({{"000", 1.0}, {"111", -1.0}}),
              states::from_kets({{"011", 1.0}, {"100", 1.0}}), states::from_kets({{"011", 1.0}, {"100", -1.0}})};
  }
  return {};
}

namespace {

struct Probe {
  bool ok = false;
  double overlap = 0.0;
  double probability = 0.0;
};

Probe probe(const PureState& s, const ProjectiveMeasurement& m, const std::vector<PureState>& basis,
            double min_probability) {
  const int n = s.qubits();
  const ComplexVector chi = contraction(n, m.qubit, m.direction()) * s.amplitudes();
  Probe p;
  p.probability = chi.squaredNorm();
  if (p.probability < std::max(min_probability, kImpossible)) return p;
  p.ok = true;
  for (const auto& b : basis) p.overlap += std::norm(b.amplitudes().dot(chi)) / p.probability;
  return p;
}

}  // namespace

std::vector<MappingResult> search_mapping(const PureState& s4, int qubit, TargetFamily target,
                                          const std::string& input_name, const SearchOptions& options) {
  if (s4.qubits() != 4) throw std::invalid_argument("search_mapping: need a 4-qubit state");
  if (qubit < 0 || qubit >= 4) throw std::invalid_argument("search_mapping: qubit out of range");
  if (options.grid < 2) throw std::invalid_argument("search_mapping: grid needs at least two points");
  const auto basis = family_basis(target);
  const double pi = std::numbers::pi;
  const int g = options.grid;
  std::vector<MappingResult> out;

  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      for (int c = 0; c < g; ++c) {
        for (int outcome = 0; outcome < 2; ++outcome) {
          std::array<double, 3> ang{pi * a / (g - 1), pi * b / (g - 1), 2.0 * pi * c / g};
          ProjectiveMeasurement m{qubit, su2_params(ang[0], ang[1], ang[2]), outcome};
          Probe best = probe(s4, m, basis, options.min_probability);
          if (!best.ok) continue;
          if (best.overlap < options.min_overlap && options.refine && best.overlap > 0.5) {
            double step = pi / (g - 1) / 2.0;
            while (step > 1e-10 && best.overlap < options.min_overlap) {
              bool moved = false;
              for (int k = 0; k < 3 && !moved; ++k) {
                for (double dir : {1.0, -1.0}) {
                  auto trial = ang;
                  trial[k] += dir * step;
                  ProjectiveMeasurement tm{qubit, su2_params(trial[0], trial[1], trial[2]), outcome};
                  const Probe p = probe(s4, tm, basis, options.min_probability);
                  if (p.ok && p.overlap > best.overlap) {
                    best = p;
                    ang = trial;
                    m = tm;
                    moved = true;
                    break;
                  }
                }
              }
              if (!moved) step /= 2.0;
            }
          }
          if (best.overlap < options.min_overlap) continue;
          const Projected pr = project(s4, m);
          MappingResult r{input_name, m, pr.state, pr.probability, {}, best.overlap, classify3(pr.state)};
          for (const auto& f : basis) r.coefficients.push_back(f.amplitudes().dot(pr.state.amplitudes()));
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

}  // namespace qent
