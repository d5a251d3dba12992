#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qent/qstate.hpp"

namespace qent::states {

enum class Sign { plus, minus };

PureState ghz(int n);
PureState w(int n);
/// Single-hole analogue of W (all popcount n-1 kets).
PureState w_tilde(int n);
/// (|W_n> +/- |W~_n>)/sqrt(2), n in 3..4.
PureState g_state(int n, Sign sign);

PureState chi4();
PureState chi3();
PureState psi_g();
PureState singlet4();
PureState cluster4();
PureState ghz_tilde3();
PureState psi_abc();

struct NamedState {
  std::string name;
  PureState state;
};

const std::vector<std::string>& catalog_names();
bool in_catalog(std::string_view name);
/// Throws std::invalid_argument for unknown names.
PureState named(std::string_view name);

/// Builds a state from ket strings, e.g. {{"0011", 1.0}, {"1100", 1.0}}, normalizing.
PureState from_kets(const std::vector<std::pair<std::string, Complex>>& terms);

}  // namespace qent::states
