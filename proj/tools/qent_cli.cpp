// qent: prepare states, sweep XY dynamics, evaluate genuine negativity and
// project onto single-qubit measurement outcomes.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qent/circuits.hpp"
#include "qent/dynamics.hpp"
#include "qent/gme.hpp"
#include "qent/measure.hpp"
#include "qent/state_io.hpp"
#include "qent/states.hpp"

namespace {

using namespace qent;

enum Exit { ok = 0, usage = 1, data = 2, solver = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

/// Key/value report, or two-column CSV.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fixed6(value)); }

  std::string render(const std::string& format) const {
    std::ostringstream os;
    if (format == "csv") {
      os << "key,value\n";
      for (const auto& [k, v] : rows_) os << k << "," << v << "\n";
      return os.str();
    }
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    for (const auto& [k, v] : rows_) os << k << std::string(width + 2 - k.size(), ' ') << v << "\n";
    return os.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text(out_path, text);
  }
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string amplitude_text(Complex c) { return fixed6(c.real()) + (c.imag() < 0 ? "-" : "+") + fixed6(std::abs(c.imag())) + "i"; }

void add_amplitudes(Report& r, const PureState& s) {
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (std::abs(s[i]) < 1e-12) continue;
    std::string ket = "|";
    for (int q = 0; q < s.qubits(); ++q) ket += static_cast<char>('0' + qubit_value(i, s.qubits(), q));
    r.add("amplitude " + ket + ">", amplitude_text(s[i]));
  }
}

// Small arithmetic grammar for amplitude values: numbers, + - * /, parentheses, sqrt(.).
class Expr {
 public:
  explicit Expr(std::string text) : s_(std::move(text)) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() const { throw DataError("cannot parse amplitude value '" + s_ + "'"); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) v /= factor();
      else return v;
    }
  }
  double factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!eat('(')) fail();
      const double v = sum();
      if (!eat(')') || v < 0) fail();
      return std::sqrt(v);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail();
    }
    pos_ += used;
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

PureState initial_state(const std::vector<std::string>& specs) {
  if (specs.empty()) throw UsageError("sweep needs at least one --init KET=VALUE");
  int n = 0;
  std::map<std::size_t, double> amps;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("initial amplitude must look like C0011=1, got '" + spec + "'");
    std::string ket = spec.substr(0, eq);
    if (!ket.empty() && (ket[0] == 'C' || ket[0] == 'c')) ket = ket.substr(1);
    if (ket.empty() || ket.find_first_not_of("01") != std::string::npos) {
      throw UsageError("bad basis ket '" + spec.substr(0, eq) + "'");
    }
    if (n == 0) n = static_cast<int>(ket.size());
    if (static_cast<int>(ket.size()) != n) throw UsageError("all kets must have the same length");
    if (n < 2 || n > kMaxQubits) throw UsageError("qubit count must be in 2.." + std::to_string(kMaxQubits));
    const std::size_t idx = std::stoul(ket, nullptr, 2);
    if (amps.count(idx)) throw UsageError("ket " + ket + " given twice");
    amps[idx] = Expr(spec.substr(eq + 1)).parse();
  }
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  for (const auto& [i, a] : amps) v(static_cast<Eigen::Index>(i)) = a;
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kStateTol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "initial amplitudes are not normalized (norm %.12f)", norm);
    throw DataError(buf);
  }
  return PureState(n, v);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text, int n) {
  if (text.empty() || text == "complete") {
    std::vector<std::pair<int, int>> p;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
    }
    return p;
  }
  std::vector<std::pair<int, int>> p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int a = 0, b = 0;
    char dash = 0;
    std::stringstream is(item);
    if (!(is >> a >> dash >> b) || dash != '-') throw UsageError("pairs look like 0-1,1-2; got '" + item + "'");
    p.emplace_back(a, b);
  }
  return p;
}

Grid parse_grid(const std::string& text) {
  Grid g;
  if (text.empty()) return g;
  double v[3];
  char c1 = 0, c2 = 0;
  std::stringstream ss(text);
  if (!(ss >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ':' || c2 != ':' || !ss.eof()) {
    throw UsageError("--grid expects start:stop:step, got '" + text + "'");
  }
  g = {v[0], v[1], v[2]};
  try {
    g.points();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  return g;
}

io::StateRecord load_state(const std::string& arg) {
  if (!std::ifstream(arg) && states::in_catalog(arg)) {
    io::StateRecord r;
    r.pure = states::named(arg);
    r.n = r.pure->qubits();
    return r;
  }
  return io::read_state(arg);
}

std::string catalog_match(const PureState& s) {
  for (const auto& name : states::catalog_names()) {
    const PureState t = states::named(name);
    if (t.qubits() == s.qubits() && fidelity(t, s) > 1.0 - 1e-9) return name;
  }
  return "-";
}

struct Common {
  std::string out;
  std::string format = "report";
  std::uint64_t seed = 1;
  bool verbose = false;
};

sdp::Options solver_options(const Common& c) {
  sdp::Options o;
  o.verbose = c.verbose;
  return o;
}

int cmd_prepare(const std::string& name, const Common& c) {
  Report r;
  if (name == "biseparable3" || name == "biseparable4") {
    const DensityMatrix rho = random_biseparable(name.back() - '0', c.seed);
    emit(io::format_density(rho), c.out);
    if (!c.out.empty()) {
      r.add("state", name);
      r.add("seed", std::to_string(c.seed));
      r.add("written", c.out);
      std::cout << r.render(c.format);
    }
    return Exit::ok;
  }
  PureState state = PureState::basis(1, 0);
  std::string target = name;
  if (circuits::is_recipe(name)) {
    const auto res = circuits::recipe(name);
    state = res.final;
    target = res.target;
    r.add("recipe", name);
    r.add("target", target);
    r.add("steps", std::to_string(res.log.size() - 1));
    if (c.verbose) {
      for (std::size_t k = 1; k < res.log.size(); ++k) r.add("step " + std::to_string(k), res.log[k].label);
    }
    r.add("success_probability", res.success_probability);
    r.add("kraus_probability", res.kraus_probability);
    for (const auto& [k, v] : res.observables) {
      if (k != "fidelity" && k != "phase_matched_fidelity") r.add(k, v);
    }
  } else if (states::in_catalog(name)) {
    state = states::named(name);
    r.add("state", name);
    r.add("success_probability", 1.0);
  } else {
    throw UsageError("unknown recipe or state '" + name + "'");
  }
  const PureState t = states::named(target);
  r.add("fidelity", fidelity(t, state));
  r.add("phase_matched_fidelity", local_phase_match(t, state).value);
  if (state.qubits() >= 2) r.add("E", genuine_negativity(state, solver_options(c)).value);
  if (c.out.empty()) {
    if (c.verbose) add_amplitudes(r, state);
  } else {
    io::write_text(c.out, io::format_state(state));
    r.add("written", c.out);
  }
  std::cout << r.render(c.format);
  return Exit::ok;
}

int cmd_sweep(const std::vector<std::string>& init, const std::string& pairs, double g, const std::string& grid,
              unsigned threads, bool no_gme, const Common& c) {
  const PureState s0 = initial_state(init);
  const XYHamiltonian h(s0.qubits(), parse_pairs(pairs, s0.qubits()), g);
  const auto points = parse_grid(grid).points();
  const auto opts = solver_options(c);
  StateMetric metric;
  if (!no_gme) metric = [opts](const PureState& s) { return genuine_negativity(s, opts).value; };
  const auto records = sweep(h, s0, points, metric, threads);
  std::ostringstream os;
  if (no_gme) {
    os << "gt";
    for (std::size_t i = 0; i < s0.dim(); ++i) os << ",p" << i;
    os << "\n";
    for (const auto& rec : records) {
      os << fixed6(rec.gt);
      for (std::size_t i = 0; i < s0.dim(); ++i) os << "," << fixed6(std::norm(rec.state[i]));
      os << "\n";
    }
  } else {
    write_sweep_csv(os, records);
  }
  emit(os.str(), c.out);
  return Exit::ok;
}

int cmd_gme(const std::string& file, const Common& c) {
  const auto rec = load_state(file);
  const DensityMatrix rho = rec.as_density();
  if (rho.qubits() < 2) throw DataError("genuine negativity needs at least two qubits");
  const auto res = genuine_negativity(rho, solver_options(c));
  Report r;
  r.add("qubits", std::to_string(rho.qubits()));
  r.add("E", res.value);
  if (c.verbose) {
    r.add("objective", res.objective);
    r.add("iterations", std::to_string(res.solver_stats.iterations));
    r.add("primal_residual", sci(res.solver_stats.primal_residual));
    r.add("dual_residual", sci(res.solver_stats.dual_residual));
    r.add("gap", sci(res.solver_stats.gap));
    const auto parts = bipartitions(rho.qubits()).items;
    for (const auto& m : parts) {
      std::string a, b;
      for (int q = 0; q < rho.qubits(); ++q) ((m.subset() >> q) & 1U ? a : b) += static_cast<char>('0' + q);
      r.add("negativity " + a + "|" + b, bipartite_negativity(rho, m));
    }
  }
  emit(r.render(c.format), c.out);
  return Exit::ok;
}

TargetFamily parse_family(const std::string& f) {
  if (f == "w") return TargetFamily::w_span;
  if (f == "w_ghz_tilde") return TargetFamily::w_ghz_tilde_span;
  if (f == "ghz") return TargetFamily::ghz_family;
  throw UsageError("unknown family '" + f + "' (w, w_ghz_tilde, ghz)");
}

std::array<double, 4> parse_v(const std::string& text) {
  std::array<double, 4> v{};
  std::stringstream ss(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 4) throw UsageError("--v expects four values t,y1,y2,y3");
    try {
      v[k++] = Expr(item).parse();
    } catch (const DataError&) {
      throw UsageError("--v: cannot parse '" + item + "'");
    }
  }
  if (k != 4) throw UsageError("--v expects four values t,y1,y2,y3");
  return v;
}

int cmd_project(const std::string& file, int qubit, const std::string& v, int outcome, const std::string& family,
                int grid, const Common& c) {
  const auto rec = load_state(file);
  if (!family.empty()) {
    if (!rec.pure) throw DataError("mapping search needs a pure state");
    SearchOptions opts;
    opts.grid = grid;
    const auto results = search_mapping(*rec.pure, qubit, parse_family(family), file, opts);
    std::ostringstream os;
    if (c.format == "csv") {
      os << "t,y1,y2,y3,outcome,probability,overlap,class";
      for (std::size_t k = 0; k < family_basis(parse_family(family)).size(); ++k) os << ",re_c" << k << ",im_c" << k;
      os << "\n";
      for (const auto& m : results) {
        for (double p : m.measurement.v_params) os << fixed6(p) << ",";
        os << m.measurement.outcome << "," << fixed6(m.probability) << "," << fixed6(m.span_overlap) << ","
           << to_string(m.class_label);
        for (const auto& co : m.coefficients) os << "," << fixed6(co.real()) << "," << fixed6(co.imag());
        os << "\n";
      }
    } else {
      std::map<std::string, int> counts;
      for (const auto& m : results) ++counts[to_string(m.class_label)];
      Report r;
      r.add("input", file);
      r.add("qubit", std::to_string(qubit));
      r.add("family", to_string(parse_family(family)));
      r.add("matches", std::to_string(results.size()));
      for (const auto& [k, n] : counts) r.add("class " + k, std::to_string(n));
      os << r.render(c.format);
    }
    emit(os.str(), c.out);
    return Exit::ok;
  }
  ProjectiveMeasurement m{qubit, parse_v(v), outcome};
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Report r;
  r.add("qubit", std::to_string(qubit));
  r.add("outcome", std::to_string(outcome));
  if (rec.pure) {
    const auto res = project(*rec.pure, m);
    r.add("probability", res.probability);
    r.add("identified", catalog_match(res.state));
    if (res.state.qubits() == 3) r.add("class", to_string(classify3(res.state)));
    add_amplitudes(r, res.state);
  } else {
    const auto res = project(*rec.density, m);
    r.add("probability", res.probability);
  }
  emit(r.render(c.format), c.out);
  return Exit::ok;
}

int cmd_catalog(bool with_gme, const Common& c) {
  std::ostringstream os;
  if (c.format == "csv") os << (with_gme ? "name,qubits,E\n" : "name,qubits\n");
  for (const auto& name : states::catalog_names()) {
    const PureState s = states::named(name);
    if (c.format == "csv") {
      os << name << "," << s.qubits();
      if (with_gme) os << "," << fixed6(genuine_negativity(s, solver_options(c)).value);
      os << "\n";
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-12s %d", name.c_str(), s.qubits());
      os << buf;
      if (with_gme) os << "  E " << fixed6(genuine_negativity(s, solver_options(c)).value);
      os << "\n";
    }
  }
  for (const auto& name : circuits::recipe_names()) {
    if (c.format != "csv") os << "recipe       " << name << "\n";
  }
  emit(os.str(), c.out);
  return Exit::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genuine multipartite entanglement from XY interactions"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output path (default: stdout)");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "report"}));
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_flag("--verbose", common.verbose, "Solver log and extra detail");
  };

  std::string name;
  auto* prepare = app.add_subcommand("prepare", "Run a recipe or load a catalog state and certify it");
  prepare->add_option("name", name, "Recipe, catalog state, or biseparable3/biseparable4")->required();
  add_common(prepare);

  std::vector<std::string> init;
  std::string pairs, grid;
  double g = 1.0;
  unsigned threads = 0;
  bool no_gme = false;
  auto* sw = app.add_subcommand("sweep", "Evolve under XY coupling and report E against gt");
  sw->add_option("--init", init, "Initial amplitudes, e.g. C0001=sqrt(2/3)")->required();
  sw->add_option("--pairs", pairs, "Coupled pairs like 0-1,1-2 (default: complete graph)");
  sw->add_option("--g", g, "Coupling strength");
  sw->add_option("--grid", grid, "start:stop:step (default 0:3.2:0.01)");
  sw->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sw->add_flag("--populations", no_gme, "Print basis populations instead of E");
  add_common(sw);

  std::string file;
  auto* gme = app.add_subcommand("gme", "Genuine negativity of a stored state");
  gme->add_option("state", file, "State file or catalog name")->required();
  add_common(gme);

  int qubit = 0, outcome = 0, search_grid = 20;
  std::string vparams = "1,0,0,0", family;
  auto* proj = app.add_subcommand("project", "Projective measurement on one qubit");
  proj->add_option("state", file, "State file or catalog name")->required();
  proj->add_option("--qubit", qubit, "Measured qubit")->check(CLI::NonNegativeNumber);
  proj->add_option("--v", vparams, "t,y1,y2,y3 with V = tI + i y.sigma");
  proj->add_option("--outcome", outcome, "Outcome 0 or 1")->check(CLI::IsMember({0, 1}));
  proj->add_option("--search", family, "Search measurement directions mapping into a family (w, w_ghz_tilde, ghz)");
  proj->add_option("--search-grid", search_grid, "Points per angle for --search")->check(CLI::Range(2, 200));
  add_common(proj);

  bool with_gme = false;
  auto* cat = app.add_subcommand("catalog", "List named states and recipes");
  cat->add_flag("--gme", with_gme, "Also evaluate E for each state");
  add_common(cat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*prepare) return cmd_prepare(name, common);
    if (*sw) return cmd_sweep(init, pairs, g, grid, threads, no_gme, common);
    if (*gme) return cmd_gme(file, common);
    if (*proj) return cmd_project(file, qubit, vparams, outcome, family, search_grid, common);
    if (*cat) return cmd_catalog(with_gme, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return Exit::solver;
  } catch (const io::StateFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::data;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::data;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::data;
  }
  return Exit::usage;
}
