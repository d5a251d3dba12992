#include "qent/dynamics.hpp"

#include <algorithm>
#include <cstdio>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

#include "qent/numerics.hpp"

namespace qent {

XYHamiltonian::XYHamiltonian(int n, std::vector<std::pair<int, int>> pairs, double g)
    : n_(n), pairs_(std::move(pairs)), g_(g) {
  if (n < 2 || n > kMaxQubits) throw std::invalid_argument("XYHamiltonian: n must be in 2..5");
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("XYHamiltonian: g must be positive");
  std::set<std::pair<int, int>> seen;
  for (auto& [i, j] : pairs_) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("XYHamiltonian: qubit index out of range");
    }
    if (i == j) throw std::invalid_argument("XYHamiltonian: pair couples a qubit to itself");
    if (!seen.insert(std::minmax(i, j)).second) {
      throw std::invalid_argument("XYHamiltonian: duplicate pair");
    }
  }
}

ComplexMatrix XYHamiltonian::matrix() const {
  const auto single = [&](int q, const Matrix2c& p) {
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < n_; ++k) acc = kron(acc, k == q ? ComplexMatrix(p) : ComplexMatrix::Identity(2, 2));
    return acc;
  };
  const Eigen::Index d = Eigen::Index{1} << n_;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (const auto& [i, j] : pairs_) {
    h += 0.5 * g_ *
         (single(i, pauli::x()) * single(j, pauli::x()) + single(i, pauli::y()) * single(j, pauli::y()));
  }
  return h;
}

ComplexMatrix XYHamiltonian::block(const std::vector<std::size_t>& basis) const {
  std::unordered_map<std::size_t, Eigen::Index> pos;
  for (std::size_t k = 0; k < basis.size(); ++k) pos.emplace(basis[k], static_cast<Eigen::Index>(k));
  const auto m = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix h = ComplexMatrix::Zero(m, m);
  for (Eigen::Index col = 0; col < m; ++col) {
    const std::size_t ket = basis[static_cast<std::size_t>(col)];
    for (const auto& [i, j] : pairs_) {
      const int bi = qubit_value(ket, n_, i), bj = qubit_value(ket, n_, j);
      if (bi == bj) continue;
      const std::size_t hopped =
          ket ^ (std::size_t{1} << basis_bit(n_, i)) ^ (std::size_t{1} << basis_bit(n_, j));
      const auto it = pos.find(hopped);
      if (it == pos.end()) throw std::invalid_argument("XYHamiltonian::block: basis not closed under hopping");
      h(it->second, col) += g_;
    }
  }
  return h;
}

XYHamiltonian pairwise(int n, int i, int j, double g) { return XYHamiltonian(n, {{i, j}}, g); }

XYHamiltonian complete_graph(int n, double g) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return XYHamiltonian(n, std::move(pairs), g);
}

PureState evolve(const XYHamiltonian& h, const PureState& s, double gt) {
  if (h.qubits() != s.qubits()) throw std::invalid_argument("evolve: qubit count mismatch");
  const double t = gt / h.coupling();
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(s.dim()));
  for (const auto& set : excitation_sets(s.qubits())) {
    ComplexVector local(static_cast<Eigen::Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k) local(static_cast<Eigen::Index>(k)) = s[set[k]];
    if (local.squaredNorm() == 0.0) continue;
    const ComplexVector moved = expm_unitary(h.block(set), t) * local;
    for (std::size_t k = 0; k < set.size(); ++k) {
      out(static_cast<Eigen::Index>(set[k])) = moved(static_cast<Eigen::Index>(k));
    }
  }
  return PureState::normalized(s.qubits(), out);
}

std::vector<double> Grid::points() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (stop < start) throw std::invalid_argument("grid stop must not precede start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> pts(count);
  for (std::size_t k = 0; k < count; ++k) pts[k] = start + static_cast<double>(k) * step;
  return pts;
}

std::vector<SweepRecord> sweep(const XYHamiltonian& h, const PureState& s0,
                               const std::vector<double>& gt_grid, const StateMetric& metric,
                               unsigned threads) {
  if (!std::is_sorted(gt_grid.begin(), gt_grid.end())) {
    throw std::invalid_argument("sweep: grid must be ascending");
  }
  std::vector<SweepRecord> records;
  records.reserve(gt_grid.size());
  for (double gt : gt_grid) records.push_back({gt, evolve(h, s0, gt), std::nullopt});
  if (!metric) return records;

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(records.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < records.size(); k = next++) {
      try {
        records[k].gme_value = metric(records[k].state);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = records.size();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "gt,E\n";
  char line[64];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%.6f,%.6f\n", r.gt, r.gme_value.value_or(0.0));
    out << line;
  }
}

}  // namespace qent
