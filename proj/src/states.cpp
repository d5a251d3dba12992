#include "qent/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace qent::states {
namespace {

void check_range(const char* what, int n, int lo, int hi) {
  if (n < lo || n > hi) {
    throw std::invalid_argument(std::string(what) + ": n must be in " + std::to_string(lo) + ".." +
                                std::to_string(hi));
  }
}

PureState uniform_over_popcount(int n, int excitations) {
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (popcount(static_cast<std::size_t>(i)) == excitations) v(i) = 1.0;
  }
  return PureState::normalized(n, v);
}

}  // namespace

PureState from_kets(const std::vector<std::pair<std::string, Complex>>& terms) {
  if (terms.empty()) throw std::invalid_argument("from_kets: no terms");
  const int n = static_cast<int>(terms.front().first.size());
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  for (const auto& [ket, amp] : terms) {
    if (static_cast<int>(ket.size()) != n) throw std::invalid_argument("from_kets: ragged ket " + ket);
    std::size_t idx = 0;
    for (char c : ket) {
      if (c != '0' && c != '1') throw std::invalid_argument("from_kets: bad ket " + ket);
      idx = (idx << 1) | static_cast<std::size_t>(c - '0');
    }
    v(static_cast<Eigen::Index>(idx)) += amp;
  }
  return PureState::normalized(n, v);
}

PureState ghz(int n) {
  check_range("ghz", n, 2, kMaxQubits);
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState(n, std::move(v));
}

PureState w(int n) {
  check_range("w", n, 2, kMaxQubits);
  return uniform_over_popcount(n, 1);
}

PureState w_tilde(int n) {
  check_range("w_tilde", n, 2, kMaxQubits);
  return uniform_over_popcount(n, n - 1);
}

PureState g_state(int n, Sign sign) {
  check_range("g_state", n, 3, 4);
  const double s = sign == Sign::plus ? 1.0 : -1.0;
  return PureState::normalized(n, w(n).amplitudes() + s * w_tilde(n).amplitudes());
}

PureState chi4() {
  return from_kets({{"1111", std::sqrt(2.0)}, {"0001", 1.0}, {"0010", 1.0}, {"0100", 1.0}, {"1000", 1.0}});
}

PureState chi3() { return from_kets({{"001", 1.0}, {"010", 1.0}, {"100", 1.0}, {"111", -1.0}}); }

PureState psi_g() {
  return from_kets({{"0001", 1.0}, {"0010", 1.0}, {"0100", 1.0}, {"1000", 1.0},
                    {"0111", 1.0}, {"1011", -1.0}, {"1101", -1.0}, {"1110", 1.0}});
}

PureState singlet4() {
  return from_kets({{"0011", 1.0}, {"1100", 1.0}, {"0101", -0.5}, {"0110", -0.5}, {"1001", -0.5},
                    {"1010", -0.5}});
}

PureState cluster4() {
  return from_kets({{"0000", 1.0}, {"0011", 1.0}, {"1100", 1.0}, {"1111", -1.0}});
}

PureState ghz_tilde3() { return from_kets({{"000", std::sqrt(1.0 / 3.0)}, {"111", std::sqrt(2.0 / 3.0)}}); }

PureState psi_abc() { return from_kets({{"000", std::sqrt(2.0 / 3.0)}, {"111", std::sqrt(1.0 / 3.0)}}); }

namespace {
const std::map<std::string, std::function<PureState()>, std::less<>>& registry() {
  static const std::map<std::string, std::function<PureState()>, std::less<>> table = {
      {"ghz3", [] { return ghz(3); }},
      {"ghz4", [] { return ghz(4); }},
      {"w3", [] { return w(3); }},
      {"w4", [] { return w(4); }},
      {"wt3", [] { return w_tilde(3); }},
      {"wt4", [] { return w_tilde(4); }},
      {"g3p", [] { return g_state(3, Sign::plus); }},
      {"g3m", [] { return g_state(3, Sign::minus); }},
      {"g4p", [] { return g_state(4, Sign::plus); }},
      {"psi_g", psi_g},
      {"chi3", chi3},
      {"chi4", chi4},
      {"singlet4", singlet4},
      {"cluster4", cluster4},
      {"ghz_tilde3", ghz_tilde3},
      {"psi_abc", psi_abc},
  };
  return table;
}
}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"ghz3", "ghz4", "w3",   "w4",       "wt3",
                                                 "wt4",  "g3p",  "g3m",  "g4p",      "psi_g",
                                                 "chi3", "chi4", "singlet4", "cluster4",
                                                 "ghz_tilde3", "psi_abc"};
  return names;
}

bool in_catalog(std::string_view name) { return registry().find(name) != registry().end(); }

PureState named(std::string_view name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown state name: " + std::string(name));
  return it->second();
}

}  // namespace qent::states
