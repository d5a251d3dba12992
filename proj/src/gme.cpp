#include "qent/gme.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace qent {

BipartitionList bipartitions(int n) {
  if (n < 2 || n > kMaxQubits) throw std::invalid_argument("bipartitions: n must be in 2.." + std::to_string(kMaxQubits));
  BipartitionList list;
  list.n = n;
  const std::uint32_t top = 1U << (n - 1);
  const std::uint32_t full = (1U << n) - 1U;
  for (std::uint32_t rest = 0; rest < top; ++rest) {
    const std::uint32_t subset = 1U | (rest << 1);
    if (subset == full) continue;
    list.items.emplace_back(n, subset);
  }
  return list;
}

sdp::Problem gme_problem(const DensityMatrix& rho) {
  const int n = rho.qubits();
  const int d = 1 << n;
  sdp::Problem p;
  const auto w = p.add_variable("W", d, sdp::Bound::free);
  p.objective[w] = rho.matrix();
  for (const auto& m : bipartitions(n).items) {
    const std::string tag = std::to_string(m.subset());
    const auto pm = p.add_variable("P" + tag, d, sdp::Bound::box);
    const auto qm = p.add_variable("Q" + tag, d, sdp::Bound::box);
    sdp::MatrixEquality eq;
    eq.rhs = ComplexMatrix::Zero(d, d);
    eq.terms.push_back({w, sdp::LinearMap::identity()});
    eq.terms.push_back({pm, sdp::LinearMap::identity(-1.0)});
    eq.terms.push_back({qm, sdp::LinearMap::transpose(n, m.subset(), -1.0)});
    p.matrix_equalities.push_back(std::move(eq));
  }
  return p;
}

GmeResult genuine_negativity(const DensityMatrix& rho, const sdp::Options& options) {
  const sdp::Solution sol = sdp::solve(gme_problem(rho), options);
  if (sol.status != sdp::Status::optimal) {
    throw SolverError(sol.status, std::string("genuine_negativity: solver finished with status ") +
                                      sdp::to_string(sol.status));
  }
  GmeResult r;
  r.objective = sol.objective_value;
  r.value = std::max(0.0, -sol.objective_value);
  r.witness = sol.values[0];
  for (std::size_t k = 1; k + 1 < sol.values.size(); k += 2) {
    r.decompositions.emplace_back(sol.values[k], sol.values[k + 1]);
  }
  r.solver_stats = {sol.status, sol.iterations, sol.primal_residual, sol.dual_residual, sol.gap};
  return r;
}

GmeResult genuine_negativity(const PureState& psi, const sdp::Options& options) {
  return genuine_negativity(density_of(psi), options);
}

double bipartite_negativity(const DensityMatrix& rho, const Bipartition& m) {
  return 0.5 * (trace_norm(partial_transpose(rho, m)) - 1.0);
}

bool is_ppt(const DensityMatrix& rho, const Bipartition& m) {
  return min_eigenvalue(partial_transpose(rho, m)) >= -1e-9;
}

namespace {

ComplexVector random_pure(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  ComplexVector v(1 << n);
  for (auto& a : v) a = Complex(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace

DensityMatrix random_biseparable(int n, std::uint64_t seed) {
  if (n < 3 || n > 4) throw std::invalid_argument("random_biseparable: n must be 3 or 4");
  std::mt19937_64 rng(seed);
  const auto parts = bipartitions(n).items;
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 6);
  const int k = count(rng);
  const int d = 1 << n;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  double total = 0.0;
  for (int term = 0; term < k; ++term) {
    const Bipartition& m = parts[pick(rng)];
    const std::uint32_t a = m.subset();
    const int na = popcount(a);
    const ComplexVector va = random_pure(rng, na);
    const ComplexVector vb = random_pure(rng, n - na);
    ComplexVector psi(d);
    for (int idx = 0; idx < d; ++idx) {
      int ia = 0, ib = 0;
      for (int q = 0; q < n; ++q) {
        const int bit = qubit_value(static_cast<std::size_t>(idx), n, q);
        if ((a >> q) & 1U) ia = (ia << 1) | bit;
        else ib = (ib << 1) | bit;
      }
      psi(idx) = va(ia) * vb(ib);
    }
    const double p = weight(rng) + 1e-3;
    total += p;
    rho += p * psi * psi.adjoint();
  }
  rho /= total;
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(n, rho);
}

}  // namespace qent
