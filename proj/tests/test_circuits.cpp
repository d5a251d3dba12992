#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qent/circuits.hpp"
#include "qent/dynamics.hpp"
#include "qent/gme.hpp"
#include "qent/states.hpp"

using namespace qent;
using namespace qent::circuits;

namespace {

ComplexMatrix embed(const Matrix2c& m, int target, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = oracle::kron(out, q == target ? ComplexMatrix(m) : ComplexMatrix::Identity(2, 2));
  return out;
}

/// Raw f x f x f action on a 3-qubit vector, built from the filter matrices directly.
ComplexVector triple(const Matrix2c& f, const ComplexVector& v) {
  const ComplexMatrix ff = oracle::kron(oracle::kron(ComplexMatrix(f), ComplexMatrix(f)), ComplexMatrix(f));
  return ff * v;
}

/// Equal up to a global phase, entrywise.
double phase_aligned_diff(const ComplexVector& a, const ComplexVector& b) {
  Eigen::Index k = 0;
  b.cwiseAbs().maxCoeff(&k);
  const Complex ph = a(k) / b(k);
  return (a - (ph / std::abs(ph)) * b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("circuits") {

TEST_CASE("rotation convention") {
  const auto r = apply(Rotation{Axis::z, 0.7, 0}, PureState::basis(1, 0));
  CHECK(std::abs(r.state[0] - std::polar(1.0, -0.35)) < 1e-15);
  CHECK(r.probability == 1.0);
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const Matrix2c p = a == Axis::x ? pauli::x() : a == Axis::y ? pauli::y() : pauli::z();
    CHECK(oracle::max_abs_diff(rotation_matrix(a, 1.1), oracle::expm(ComplexMatrix(p), 0.55)) < 1e-14);
  }
}

TEST_CASE("iSWAP") {
  const auto r = apply(ISwap{0, 1}, states::from_kets({{"01", 1.0}}));
  CHECK(std::abs(r.state[2] - Complex(0, -1)) < 1e-12);
  CHECK(r.probability == 1.0);
  CHECK_THROWS_AS(apply(ISwap{0, 2}, PureState::basis(2, 0)), std::invalid_argument);
}

TEST_CASE("unitary gates preserve the norm") {
  std::mt19937_64 rng(41);
  const auto s = oracle::random_state(4, rng);
  const std::vector<GateOp> ops{Rotation{Axis::x, 0.3, 1}, Rotation{Axis::y, -2.1, 3}, Rotation{Axis::z, 5.0, 0},
                                ISwap{1, 3}, XYEvolve{{{0, 1}, {2, 3}}, 0.77}, Excite{2}};
  for (const auto& op : ops) {
    const auto r = apply(op, s);
    CHECK(r.state.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.probability == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gates agree with explicit operators") {
  std::mt19937_64 rng(42);
  const auto s = oracle::random_state(3, rng);
  const auto r = apply(Rotation{Axis::y, 0.9, 2}, s);
  CHECK((r.state.amplitudes() - embed(rotation_matrix(Axis::y, 0.9), 2, 3) * s.amplitudes()).norm() < 1e-14);
  const auto e = apply(Excite{0}, s);
  CHECK((e.state.amplitudes() - embed(pauli::x(), 0, 3) * s.amplitudes()).norm() < 1e-14);
  const auto x = apply(XYEvolve{{{0, 2}}, 1.3}, s);
  CHECK((x.state.amplitudes() - oracle::expm(oracle::xy_hamiltonian(3, {{0, 2}}, 1.0), 1.3) * s.amplitudes()).norm() < 1e-10);
}

TEST_CASE("filters normalize and report the squared norm") {
  std::mt19937_64 rng(43);
  const auto s = oracle::random_state(3, rng);
  Matrix2c f;
  f << 0.3, Complex(0.1, 0.2), -0.4, 1.7;
  const auto r = apply(Filter{f, 1}, s);
  const ComplexVector raw = embed(f, 1, 3) * s.amplitudes();
  CHECK(r.probability == doctest::Approx(raw.squaredNorm()).epsilon(1e-12));
  CHECK((r.state.amplitudes() - raw / raw.norm()).norm() < 1e-12);

  Matrix2c kill;
  kill << 1e-13, 0, 0, 1e13;
  try {
    apply(Filter{kill, 0}, PureState::basis(1, 0));
    FAIL("expected an exception");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("filtered to zero") != std::string::npos);
  }
  Matrix2c singular;
  singular << 0, 0, 0, 1;
  CHECK_THROWS_AS(apply(Filter{singular, 0}, PureState::basis(1, 1)), std::invalid_argument);
}

TEST_CASE("filter on GHZ gives the asymmetric GHZ state") {
  const double a = std::pow(2.0, 0.25);
  Matrix2c f;
  f << a, 0, 0, 1 / a;
  const auto r = apply(Filter{f, 0}, states::ghz(3));
  CHECK((r.state.amplitudes() - states::psi_abc().amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
  const double expected = (a * a + 1 / (a * a)) / 2;
  CHECK(r.probability == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("G-state filters reach GHZ with probability 1/9") {
  for (auto sign : {states::Sign::plus, states::Sign::minus}) {
    const Matrix2c f = sign == states::Sign::plus ? filter_plus() : filter_minus();
    const ComplexVector raw = triple(f, states::g_state(3, sign).amplitudes());
    CHECK(phase_aligned_diff(raw, states::ghz(3).amplitudes() / 3.0) < 1e-10);
    CHECK(raw.squaredNorm() == doctest::Approx(1.0 / 9.0).epsilon(1e-10));

    const auto ops = g3_filters(sign);
    RecipeResult r = run(states::g_state(3, sign), {ops.begin(), ops.end()});
    CHECK(r.success_probability == doctest::Approx(1.0 / 9.0).epsilon(1e-10));
    CHECK(fidelity(r.final, states::ghz(3)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(apply(Filter{filter_plus(), 0}, PureState::basis(1, 0)).probability > 0.0);
}

TEST_CASE("success probability is the product of the filter probabilities") {
  std::mt19937_64 rng(44);
  const auto s = oracle::random_state(3, rng);
  Matrix2c f1, f2;
  f1 << 1.2, 0.1, 0, 0.6;
  f2 << 0.5, 0, Complex(0, 0.3), 1.0;
  const std::vector<GateOp> ops{Filter{f1, 0}, Rotation{Axis::x, 0.4, 1}, Filter{f2, 2}};
  double expect = 1.0;
  PureState cur = s;
  for (const auto& op : ops) {
    const auto a = circuits::apply(op, cur);
    expect *= a.probability;
    cur = a.state;
  }
  const auto r = run(s, ops);
  CHECK(r.success_probability == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.log.size() == ops.size() + 1);
  CHECK(run(s, {Rotation{Axis::z, 1.0, 0}}).success_probability == 1.0);
}

TEST_CASE("GHZ recipes") {
  for (const char* name : {"ghz3", "ghz4"}) {
    CAPTURE(name);
    const auto r = recipe(name);
    const auto target = states::named(name);
    CHECK(local_phase_match(target, r.final).value >= 1 - 1e-9);
    CHECK(r.observables.at("phase_matched_fidelity") >= 1 - 1e-9);
    CHECK(r.success_probability == 1.0);
    CHECK(std::abs(genuine_negativity(r.final).value - 0.5) < 5e-4);
  }
}

TEST_CASE("W recipes") {
  for (const char* name : {"w3", "w3_peak2", "w4"}) {
    CAPTURE(name);
    const auto r = recipe(name);
    CHECK(fidelity(r.final, states::named(r.target)) >= 1 - 1e-9);
    CHECK(r.observables.at("phase_matched_fidelity") >= 1 - 1e-9);
  }
}

TEST_CASE("chi4 recipe") {
  const auto r = recipe("chi4");
  CHECK(fidelity(r.final, states::chi4()) >= 1 - 1e-9);
  const double a = std::pow(2.0, 0.25);
  CHECK(r.success_probability == doctest::Approx((a * a + 1 / (a * a)) / 2).epsilon(1e-12));
  CHECK(r.kraus_probability > 0.0);
  CHECK(r.kraus_probability <= 1.0);

  const auto it = std::find_if(r.log.begin(), r.log.end(), [](const Step& s) { return s.label == "excite q3"; });
  REQUIRE(it != r.log.end());
  ComplexVector expect = ComplexVector::Zero(16);
  expect(1) = std::sqrt(2.0 / 3.0);
  expect(15) = std::sqrt(1.0 / 3.0);
  CHECK((it->state.amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-9);
  const ComplexVector psi1 = oracle::kron(states::psi_abc().amplitudes(), Eigen::Vector2cd(0, 1));
  CHECK((it->state.amplitudes() - psi1).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("G3 attempt falls short of G3") {
  const auto r = recipe("g3_attempt");
  const double pm = r.observables.at("phase_matched_fidelity");
  CHECK(pm < 1 - 1e-3);
  CHECK(pm >= oracle::phase_grid_max(states::g_state(3, states::Sign::plus), r.final, 64) - 1e-9);
  CHECK(std::abs(pm - 7.0 / 9.0) < 1e-6);
  CHECK(r.observables.count("phi1") == 1);
  CHECK(r.observables.count("phi2") == 1);
}

TEST_CASE("singlet recipe") {
  const auto r = recipe("singlet4");
  const double gt = r.observables.at("gt");
  CHECK(std::abs(gt - 0.6) < 0.02);
  CHECK(std::abs(r.final[3]) == doctest::Approx(std::abs(r.final[12])).epsilon(1e-12));
  CHECK(std::abs(genuine_negativity(r.final).value - 0.5) < 5e-4);
  CHECK(r.observables.at("phase_matched_fidelity") <= 1.0);
}

TEST_CASE("unknown recipe") {
  CHECK_THROWS_AS(recipe("nope"), std::invalid_argument);
  CHECK_FALSE(is_recipe("nope"));
  for (const auto& n : recipe_names()) CHECK(is_recipe(n));
}

}
