#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qent/qstate.hpp"

namespace qent::io {

/// Malformed or invalid state text. `line` is 1-based (0 when unknown); `field`
/// is a path such as "amplitudes[3][1]".
class StateFileError : public std::runtime_error {
 public:
  StateFileError(const std::string& source, int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Either a pure state or a density matrix.
struct StateRecord {
  int n = 0;
  std::optional<PureState> pure;
  std::optional<DensityMatrix> density;

  DensityMatrix as_density() const;
};

/// `{ "n": 3, "amplitudes": [[re, im], ...] }` or `{ "n": 3, "matrix": [[[re, im], ...], ...] }`.
StateRecord parse_state(std::string_view text, const std::string& source = "<input>");
StateRecord read_state(const std::filesystem::path& path);

/// Round-trip precision, one amplitude (or matrix row) per line.
std::string format_state(const PureState& s);
std::string format_density(const DensityMatrix& rho);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qent::io
