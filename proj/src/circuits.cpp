#include "qent/circuits.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qent/dynamics.hpp"

namespace qent::circuits {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroNorm = 1e-12;

void check_target(int target, int n) {
  if (target < 0 || target >= n) {
    throw std::invalid_argument("target qubit " + std::to_string(target) + " out of range for " +
                                std::to_string(n) + " qubits");
  }
}

double operator_norm_sq(const Matrix2c& m) {
  Eigen::JacobiSVD<Matrix2c> svd(m);
  const double s = svd.singularValues()(0);
  return s * s;
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "X";
    case Axis::y: return "Y";
    case Axis::z: return "Z";
  }
  return "?";
}

}  // namespace

Matrix2c rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  const Complex i(0.0, 1.0);
  Matrix2c m;
  switch (axis) {
    case Axis::x: m << c, -i * s, -i * s, c; break;
    case Axis::y: m << c, -s, s, c; break;
    case Axis::z: m << std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0)); break;
  }
  return m;
}

ComplexVector apply_local(const Matrix2c& m, int target, const ComplexVector& v, int n) {
  check_target(target, n);
  const Eigen::Index bit = Eigen::Index{1} << basis_bit(n, target);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = v(i), a1 = v(i | bit);
    out(i) = m(0, 0) * a0 + m(0, 1) * a1;
    out(i | bit) = m(1, 0) * a0 + m(1, 1) * a1;
  }
  return out;
}

Applied apply(const GateOp& op, const PureState& s) {
  const int n = s.qubits();
  return std::visit(
      [&](const auto& g) -> Applied {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Rotation>) {
          return {PureState::normalized(n, apply_local(rotation_matrix(g.axis, g.angle), g.target, s.amplitudes(), n)),
                  1.0};
        } else if constexpr (std::is_same_v<T, ISwap>) {
          return {evolve(pairwise(n, g.i, g.j), s, kPi / 2.0), 1.0};
        } else if constexpr (std::is_same_v<T, XYEvolve>) {
          return {evolve(XYHamiltonian(n, g.pairs), s, g.gt), 1.0};
        } else if constexpr (std::is_same_v<T, Filter>) {
          if (std::abs(g.matrix.determinant()) < kZeroNorm) throw std::invalid_argument("filter matrix is singular");
          const ComplexVector v = apply_local(g.matrix, g.target, s.amplitudes(), n);
          const double p = v.squaredNorm();
          if (std::sqrt(p) < kZeroNorm) throw std::domain_error("filtered to zero");
          return {PureState(n, v / std::sqrt(p)), p};
        } else {
          return {PureState::normalized(n, apply_local(pauli::x(), g.target, s.amplitudes(), n)), 1.0};
        }
      },
      op);
}

std::string describe(const GateOp& op) {
  std::ostringstream os;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Rotation>) {
          os << axis_name(g.axis) << "(" << g.angle << ") q" << g.target;
        } else if constexpr (std::is_same_v<T, ISwap>) {
          os << "iSWAP q" << g.i << ",q" << g.j;
        } else if constexpr (std::is_same_v<T, XYEvolve>) {
          os << "XY gt=" << g.gt << " pairs=" << g.pairs.size();
        } else if constexpr (std::is_same_v<T, Filter>) {
          os << "filter q" << g.target;
        } else {
          os << "excite q" << g.target;
        }
      },
      op);
  return os.str();
}

Matrix2c filter_plus() {
  const Matrix2c h = pauli::hadamard();
  Matrix2c d;
  d << 1.0 / std::sqrt(3.0), 0.0, 0.0, Complex(0.0, 1.0);
  return h * d * h;
}

Matrix2c filter_minus() {
  const Matrix2c h = pauli::hadamard();
  Matrix2c d;
  d << 0.0, 1.0 / std::sqrt(3.0), Complex(0.0, 1.0), 0.0;
  return h * d * h;
}

std::array<GateOp, 3> g3_filters(states::Sign sign) {
  const Matrix2c f = sign == states::Sign::plus ? filter_plus() : filter_minus();
  return {Filter{f, 0}, Filter{f, 1}, Filter{f, 2}};
}

RecipeResult run(const PureState& initial, const std::vector<GateOp>& ops) {
  RecipeResult r(initial);
  r.log.push_back({"initial", initial});
  for (const auto& op : ops) {
    Applied a = circuits::apply(op, r.final);
    r.success_probability *= a.probability;
    if (const auto* f = std::get_if<Filter>(&op)) r.kraus_probability *= a.probability / operator_norm_sq(f->matrix);
    r.final = std::move(a.state);
    r.log.push_back({describe(op), r.final});
  }
  return r;
}

namespace {

std::vector<std::pair<int, int>> all_pairs(int n) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  }
  return p;
}

std::vector<GateOp> ghz_ops(int n) {
  std::vector<GateOp> ops;
  for (int q = 0; q < n; ++q) ops.push_back(Rotation{Axis::y, kPi / 2.0, q});
  for (int q = 0; q + 1 < n; ++q) ops.push_back(ISwap{q, q + 1});
  for (int q = 0; q + 1 < n; ++q) ops.push_back(Rotation{Axis::x, -kPi / 2.0, q});
  return ops;
}

Complex overlap(const PureState& a, const PureState& b) { return a.amplitudes().dot(b.amplitudes()); }

void certify(RecipeResult& r) {
  const PureState target = states::named(r.target);
  r.observables["fidelity"] = fidelity(r.final, target);
  const PhaseMatch pm = local_phase_match(target, r.final);
  r.observables["phase_matched_fidelity"] = pm.value;
}

}  // namespace

double singlet_peak_gt() { return 0.5 * std::acos((std::sqrt(3.0) - 1.0) / 2.0); }

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {"ghz3", "ghz4",     "w3",        "w3_peak2",
                                                 "w4",   "chi4",     "g3_attempt", "singlet4"};
  return names;
}

bool is_recipe(std::string_view name) {
  for (const auto& n : recipe_names()) {
    if (n == name) return true;
  }
  return false;
}

RecipeResult recipe(std::string_view name) {
  RecipeResult r(PureState::basis(1, 0));
  if (name == "ghz3" || name == "ghz4") {
    const int n = name == "ghz3" ? 3 : 4;
    r = run(PureState::basis(n, 0), ghz_ops(n));
    r.target = std::string(name);
  } else if (name == "w3" || name == "w3_peak2") {
    const bool second = name == "w3_peak2";
    const double gt = second ? 4.0 * kPi / 9.0 : 2.0 * kPi / 9.0;
    const double fix = second ? 8.0 * kPi / 3.0 : -2.0 * kPi / 3.0;
    r = run(PureState::basis(3, 0), {Excite{1}, XYEvolve{all_pairs(3), gt}, Rotation{Axis::z, fix, 1}});
    r.target = "w3";
  } else if (name == "w4") {
    r = run(PureState::basis(4, 0), {Excite{3}, XYEvolve{all_pairs(4), kPi / 4.0}, Rotation{Axis::z, kPi, 3}});
    r.target = "w4";
  } else if (name == "chi4") {
    std::vector<GateOp> ops = ghz_ops(3);
    const double a = std::pow(2.0, 0.25);
    Matrix2c f;
    f << a, 0.0, 0.0, 1.0 / a;
    ops.push_back(Filter{f, 0});
    std::vector<GateOp> tail = {Excite{3}, XYEvolve{all_pairs(4), kPi / 4.0}, Rotation{Axis::z, kPi, 3}};
    for (int q = 0; q < 4; ++q) tail.push_back(Rotation{Axis::z, -5.0 * kPi / 4.0, q});
    // Grow the 3-qubit register by a fourth qubit in |0> after the filter.
    RecipeResult head = run(PureState::basis(3, 0), ops);
    const ComplexVector v3 = head.final.amplitudes();
    ComplexVector v4 = ComplexVector::Zero(16);
    for (Eigen::Index i = 0; i < 8; ++i) v4(2 * i) = v3(i);
    RecipeResult rest = run(PureState(4, v4), tail);
    r = std::move(head);
    r.log.push_back({"append q3 in |0>", rest.log.front().state});
    for (std::size_t k = 1; k < rest.log.size(); ++k) r.log.push_back(std::move(rest.log[k]));
    r.final = rest.final;
    r.success_probability *= rest.success_probability;
    r.kraus_probability *= rest.kraus_probability;
    r.target = "chi4";
  } else if (name == "g3_attempt") {
    ComplexVector v = ComplexVector::Zero(8);
    v(1) = v(3) = 1.0 / std::sqrt(2.0);
    r = run(PureState(3, v), {XYEvolve{all_pairs(3), 2.0 * kPi / 9.0}, Rotation{Axis::z, -2.0 * kPi / 3.0, 1}});
    r.target = "g3p";
    const Complex c1 = overlap(states::w(3), r.final);
    const Complex c2 = overlap(states::w_tilde(3), r.final);
    r.observables["phi1"] = std::arg(c1);
    r.observables["phi2"] = std::arg(c2);
    r.observables["relative_phase"] = std::arg(c2 / c1);
  } else if (name == "singlet4") {
    r = run(PureState::basis(4, 3), {XYEvolve{all_pairs(4), singlet_peak_gt()}});
    r.target = "singlet4";
    r.observables["gt"] = singlet_peak_gt();
  } else {
    throw std::invalid_argument("unknown recipe: " + std::string(name));
  }
  r.name = std::string(name);
  certify(r);
  return r;
}

}  // namespace qent::circuits
