#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qent/gme.hpp"
#include "qent/sdp.hpp"
#include "qent/states.hpp"

using namespace qent;
using namespace qent::sdp;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

void check_certified(const Problem& p, const Solution& s) {
  const auto c = certify(p, s.values);
  CHECK(c.bound_violation < 1e-7);
  CHECK(c.equality_residual < 1e-6);
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("minimum eigenvalue program") {
  Problem p;
  const auto x = p.add_variable("X", 3, Bound::psd);
  p.objective[x] = diag({3, 1, 2});
  p.scalar_equalities.push_back({{{x, ComplexMatrix::Identity(3, 3)}}, 1.0});
  const auto s = solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(std::abs(s.objective_value - 1.0) < 1e-6);
  CHECK(oracle::max_abs_diff(s.values[x], diag({0, 1, 0})) < 1e-4);
  check_certified(p, s);
}

TEST_CASE("one-by-one box") {
  Problem p;
  const auto x = p.add_variable("x", 1, Bound::box);
  p.objective[x] = ComplexMatrix::Ones(1, 1);
  const auto s = solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(std::abs(s.objective_value) < 1e-6);
  check_certified(p, s);
}

TEST_CASE("upper bound only") {
  Problem p;
  const auto x = p.add_variable("X", 4, Bound::upper);
  p.objective[x] = -ComplexMatrix::Identity(4, 4);
  const auto s = solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(std::abs(s.objective_value + 4.0) < 1e-6);
  check_certified(p, s);
}

TEST_CASE("free variable with a matrix equality") {
  // min <C, F> with F = X - Y, X >= 0, Y >= 0, tr X + tr Y = 1: the most negative
  // |eigenvalue| side of C wins.
  std::mt19937_64 rng(51);
  const ComplexMatrix c = oracle::random_hermitian(4, rng);
  Problem p;
  const auto f = p.add_variable("F", 4, Bound::free);
  const auto x = p.add_variable("X", 4, Bound::psd);
  const auto y = p.add_variable("Y", 4, Bound::psd);
  p.objective[f] = c;
  p.matrix_equalities.push_back({{{f, LinearMap::identity()}, {x, LinearMap::identity(-1.0)}, {y, LinearMap::identity(1.0)}},
                                 ComplexMatrix::Zero(4, 4)});
  p.scalar_equalities.push_back({{{x, ComplexMatrix::Identity(4, 4)}, {y, ComplexMatrix::Identity(4, 4)}}, 1.0});
  const auto s = solve(p);
  REQUIRE(s.status == Status::optimal);
  const auto ev = oracle::eigenvalues(c);
  CHECK(std::abs(s.objective_value - std::min(ev.front(), -ev.back())) < 1e-6);
  check_certified(p, s);
}

TEST_CASE("infeasible program is flagged") {
  Problem p;
  const auto x = p.add_variable("X", 2, Bound::psd);
  p.objective[x] = ComplexMatrix::Identity(2, 2);
  p.scalar_equalities.push_back({{{x, ComplexMatrix::Identity(2, 2)}}, -1.0});
  const auto s = solve(p);
  CHECK(s.status != Status::optimal);
}

TEST_CASE("malformed programs are rejected") {
  Problem p;
  const auto x = p.add_variable("X", 2, Bound::psd);
  p.objective[x] = ComplexMatrix::Identity(3, 3);
  CHECK_THROWS_AS(solve(p), std::invalid_argument);

  Problem q;
  const auto a = q.add_variable("A", 2, Bound::psd);
  const auto b = q.add_variable("B", 4, Bound::psd);
  q.matrix_equalities.push_back({{{a, LinearMap::identity()}, {b, LinearMap::identity()}}, ComplexMatrix::Zero(2, 2)});
  CHECK_THROWS_AS(solve(q), std::invalid_argument);

  Problem r;
  const auto c = r.add_variable("C", 2, Bound::psd);
  ComplexMatrix nh(2, 2);
  nh << 0, 1, 0, 0;
  r.objective[c] = nh;
  CHECK_THROWS_AS(solve(r), std::invalid_argument);

  Problem u;
  u.add_variable("F", 2, Bound::free);
  CHECK_THROWS_AS(solve(u), std::invalid_argument);
}

TEST_CASE("linear maps") {
  std::mt19937_64 rng(52);
  const ComplexMatrix m = oracle::random_hermitian(8, rng);
  CHECK(oracle::max_abs_diff(sdp::apply(LinearMap::identity(-1.0), m), -m) < 1e-15);
  CHECK(oracle::max_abs_diff(sdp::apply(LinearMap::transpose(3, 0b101), m), oracle::partial_transpose(m, 3, 0b101)) < 1e-15);
}

TEST_CASE("Bell state witness program reaches -1/2") {
  const auto rho = density_of(states::from_kets({{"00", 1.0}, {"11", 1.0}}));
  const auto p = gme_problem(rho);
  const auto s = solve(p);
  REQUIRE(s.status == Status::optimal);
  CHECK(std::abs(s.objective_value + oracle::negativity(rho.matrix(), 2, 1)) < 1e-6);
  CHECK(std::abs(s.objective_value + 0.5) < 1e-6);
  check_certified(p, s);
}

TEST_CASE("self-certification and complementarity decrease on witness programs") {
  std::mt19937_64 rng(53);
  std::vector<DensityMatrix> inputs{density_of(states::w(3)), density_of(states::g_state(3, states::Sign::plus)),
                                    oracle::random_density(3, rng), density_of(oracle::random_state(3, rng))};
  for (const auto& rho : inputs) {
    const auto p = gme_problem(rho);
    const auto s = solve(p);
    REQUIRE(s.status == Status::optimal);
    CHECK(s.primal_residual < 1e-7);
    CHECK(s.dual_residual < 1e-7);
    CHECK(s.gap < 1e-7);
    check_certified(p, s);
    for (std::size_t k = 1; k < s.history.size(); ++k) CHECK(s.history[k].mu < s.history[k - 1].mu);
  }
}

TEST_CASE("real-symmetric embedding keeps the optimal value") {
  std::mt19937_64 rng(54);
  std::vector<DensityMatrix> inputs{density_of(states::w(3)), oracle::random_density(2, rng),
                                    density_of(oracle::random_state(3, rng))};
  for (const auto& rho : inputs) {
    const auto p = gme_problem(rho);
    const auto e = real_embedding(p);
    for (const auto& v : e.variables) CHECK(v.real);
    const auto s = solve(p);
    const auto se = solve(e);
    REQUIRE(s.status == Status::optimal);
    REQUIRE(se.status == Status::optimal);
    CHECK(std::abs(s.objective_value - se.objective_value) < 1e-6);
    check_certified(e, se);
  }
}

TEST_CASE("options are honoured") {
  const auto p = gme_problem(density_of(states::w(3)));
  Options o;
  o.max_iter = 2;
  const auto s = solve(p, o);
  CHECK(s.status == Status::max_iterations);
  CHECK(s.iterations <= 2);
  CHECK(std::string(to_string(Status::optimal)) == "optimal");
}

}
