#include "qent/state_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace qent::io {
namespace {

using nlohmann::json;

std::string describe(const std::string& source, int line, const std::string& field, const std::string& message) {
  std::string out = source;
  if (line > 0) out += ":" + std::to_string(line);
  if (!field.empty()) out += ": field " + field;
  return out + ": " + message;
}

// Line of the element reached by following `path` (a key, then array indices)
// through the raw text. Returns 0 if the path cannot be located.
int locate(std::string_view text, const std::string& key, const std::vector<std::size_t>& indices) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  pos = text.find(':', pos + quoted.size());
  if (pos == std::string_view::npos) return 0;
  ++pos;
  for (std::size_t target : indices) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size() || text[pos] != '[') break;
    ++pos;
    std::size_t count = 0;
    int depth = 0;
    bool in_string = false;
    while (pos < text.size() && count < target) {
      const char c = text[pos];
      if (in_string) {
        if (c == '\\') ++pos;
        else if (c == '"') in_string = false;
      } else if (c == '"') {
        in_string = true;
      } else if (c == '[' || c == '{') {
        ++depth;
      } else if (c == ']' || c == '}') {
        if (depth == 0) return 0;
        --depth;
      } else if (c == ',' && depth == 0) {
        ++count;
      }
      ++pos;
    }
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text.size())), '\n'));
}

std::string path_of(const std::string& key, const std::vector<std::size_t>& indices) {
  std::string p = key;
  for (std::size_t i : indices) p += "[" + std::to_string(i) + "]";
  return p;
}

struct Context {
  std::string_view text;
  const std::string& source;

  [[noreturn]] void fail(const std::string& key, const std::vector<std::size_t>& idx, const std::string& msg) const {
    throw StateFileError(source, locate(text, key, idx), path_of(key, idx), msg);
  }
};

Complex read_complex(const json& j, const Context& ctx, const std::string& key, std::vector<std::size_t> idx) {
  if (!j.is_array() || j.size() != 2) ctx.fail(key, idx, "expected a [re, im] pair");
  double parts[2];
  for (std::size_t k = 0; k < 2; ++k) {
    idx.push_back(k);
    if (!j[k].is_number()) ctx.fail(key, idx, "expected a number");
    parts[k] = j[k].get<double>();
    if (!std::isfinite(parts[k])) ctx.fail(key, idx, "value is not finite");
    idx.pop_back();
  }
  return {parts[0], parts[1]};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_pair(Complex c) { return "[" + format_real(c.real()) + ", " + format_real(c.imag()) + "]"; }

}  // namespace

StateFileError::StateFileError(const std::string& source, int line, std::string field, const std::string& message)
    : std::runtime_error(describe(source, line, field, message)), line_(line), field_(std::move(field)) {}

DensityMatrix StateRecord::as_density() const {
  if (density) return *density;
  return density_of(*pure);
}

StateRecord parse_state(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte > 0 ? byte - 1 : 0), '\n'));
    std::string msg = e.what();
    if (const auto cut = msg.find("syntax error"); cut != std::string::npos) msg = msg.substr(cut);
    throw StateFileError(source, line, "", msg);
  }
  const Context ctx{text, source};
  if (!doc.is_object()) throw StateFileError(source, 1, "", "expected a JSON object");
  if (!doc.contains("n")) throw StateFileError(source, 0, "n", "missing");
  if (!doc["n"].is_number_integer()) ctx.fail("n", {}, "expected an integer");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > kMaxQubits) ctx.fail("n", {}, "qubit count must be in 1.." + std::to_string(kMaxQubits));
  const bool has_amp = doc.contains("amplitudes");
  const bool has_mat = doc.contains("matrix");
  if (has_amp == has_mat) throw StateFileError(source, 0, "", "expected exactly one of \"amplitudes\" or \"matrix\"");
  const std::size_t dim = std::size_t{1} << n;

  StateRecord rec;
  rec.n = n;
  if (has_amp) {
    const json& a = doc["amplitudes"];
    if (!a.is_array()) ctx.fail("amplitudes", {}, "expected an array");
    if (a.size() != dim) {
      ctx.fail("amplitudes", {}, "expected " + std::to_string(dim) + " entries, found " + std::to_string(a.size()));
    }
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = read_complex(a[i], ctx, "amplitudes", {i});
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > kStateTol) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "amplitudes are not normalized (norm %.12f)", norm);
      ctx.fail("amplitudes", {}, buf);
    }
    rec.pure.emplace(n, v);
    return rec;
  }
  const json& m = doc["matrix"];
  if (!m.is_array() || m.size() != dim) ctx.fail("matrix", {}, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix mat(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    if (!m[r].is_array() || m[r].size() != dim) ctx.fail("matrix", {r}, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_complex(m[r][c], ctx, "matrix", {r, c});
    }
  }
  try {
    rec.density.emplace(n, mat);
  } catch (const std::invalid_argument& e) {
    ctx.fail("matrix", {}, e.what());
  }
  return rec;
}

StateRecord read_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateFileError(path.string(), 0, "", "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str(), path.string());
}

std::string format_state(const PureState& s) {
  std::string out = "{\n  \"n\": " + std::to_string(s.qubits()) + ",\n  \"amplitudes\": [\n";
  for (std::size_t i = 0; i < s.dim(); ++i) {
    out += "    " + format_pair(s[i]) + (i + 1 < s.dim() ? ",\n" : "\n");
  }
  return out + "  ]\n}\n";
}

std::string format_density(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  std::string out = "{\n  \"n\": " + std::to_string(rho.qubits()) + ",\n  \"matrix\": [\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += format_pair(m(r, c)) + (c + 1 < m.cols() ? ", " : "");
    out += r + 1 < m.rows() ? "],\n" : "]\n";
  }
  return out + "  ]\n}\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qent::io
