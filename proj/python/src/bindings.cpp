#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qent/circuits.hpp"
#include "qent/dynamics.hpp"
#include "qent/gme.hpp"
#include "qent/measure.hpp"
#include "qent/states.hpp"

namespace py = pybind11;
using namespace qent;

namespace {

int qubits_for(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n < 1) throw std::invalid_argument("dimension must be a power of two");
  return n;
}

PureState to_state(const ComplexVector& v) { return PureState(qubits_for(v.size()), v); }
DensityMatrix to_density(const ComplexMatrix& m) { return DensityMatrix(qubits_for(m.rows()), m); }

DensityMatrix as_density(const py::object& obj) {
  const auto m = obj.cast<ComplexMatrix>();
  if (m.cols() == 1) return density_of(to_state(m.col(0)));
  return to_density(m);
}

py::dict gme_dict(const GmeResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["objective"] = r.objective;
  d["witness"] = r.witness;
  d["iterations"] = r.solver_stats.iterations;
  d["primal_residual"] = r.solver_stats.primal_residual;
  d["dual_residual"] = r.solver_stats.dual_residual;
  d["gap"] = r.solver_stats.gap;
  return d;
}

TargetFamily family_of(const std::string& f) {
  if (f == "w") return TargetFamily::w_span;
  if (f == "w_ghz_tilde") return TargetFamily::w_ghz_tilde_span;
  if (f == "ghz") return TargetFamily::ghz_family;
  throw std::invalid_argument("unknown family '" + f + "'");
}

}  // namespace

PYBIND11_MODULE(_qent, m) {
  m.doc() = "Genuine multipartite negativity, XY dynamics and state preparation";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("catalog_names", &states::catalog_names);
  m.def("state", [](const std::string& name) { return states::named(name).amplitudes(); }, py::arg("name"),
        "Amplitudes of a catalog state.");

  m.def("genuine_negativity", [](const py::object& s) { return genuine_negativity(as_density(s)).value; },
        py::arg("state"), "E for a state vector or density matrix.");
  m.def("genuine_negativity_details", [](const py::object& s) { return gme_dict(genuine_negativity(as_density(s))); },
        py::arg("state"));
  m.def("negativity",
        [](const py::object& s, std::uint32_t subset) {
          const DensityMatrix rho = as_density(s);
          return bipartite_negativity(rho, Bipartition(rho.qubits(), subset));
        },
        py::arg("state"), py::arg("subset"), "Negativity across the split with side A given as a qubit bitmask.");
  m.def("random_biseparable", [](int n, std::uint64_t seed) { return random_biseparable(n, seed).matrix(); },
        py::arg("n"), py::arg("seed"));

  m.def("partial_transpose",
        [](const ComplexMatrix& rho, std::uint32_t subset) {
          return partial_transpose(rho, qubits_for(rho.rows()), subset);
        },
        py::arg("rho"), py::arg("subset"));
  m.def("partial_trace",
        [](const ComplexMatrix& rho, std::uint32_t keep) { return partial_trace(rho, qubits_for(rho.rows()), keep); },
        py::arg("rho"), py::arg("keep"));

  m.def("evolve",
        [](const ComplexVector& s, double gt, std::optional<std::vector<std::pair<int, int>>> pairs) {
          const PureState p = to_state(s);
          const XYHamiltonian h = pairs ? XYHamiltonian(p.qubits(), *pairs) : complete_graph(p.qubits());
          return evolve(h, p, gt).amplitudes();
        },
        py::arg("state"), py::arg("gt"), py::arg("pairs") = py::none(),
        "XY evolution; complete graph unless pairs are given.");
  m.def("sweep",
        [](const ComplexVector& s, double start, double stop, double step, unsigned threads) {
          const PureState p = to_state(s);
          const auto records =
              sweep(complete_graph(p.qubits()), p, Grid{start, stop, step}.points(),
                    [](const PureState& x) { return genuine_negativity(x).value; }, threads);
          std::vector<std::pair<double, double>> out;
          for (const auto& r : records) out.emplace_back(r.gt, *r.gme_value);
          return out;
        },
        py::arg("state"), py::arg("start") = 0.0, py::arg("stop") = 3.2, py::arg("step") = 0.01,
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>(), "List of (gt, E) pairs.");

  m.def("recipe_names", &circuits::recipe_names);
  m.def("recipe",
        [](const std::string& name) {
          const auto r = circuits::recipe(name);
          py::dict d;
          d["target"] = r.target;
          d["state"] = r.final.amplitudes();
          d["success_probability"] = r.success_probability;
          d["kraus_probability"] = r.kraus_probability;
          d["observables"] = r.observables;
          py::list steps;
          for (const auto& s : r.log) steps.append(s.label);
          d["steps"] = steps;
          return d;
        },
        py::arg("name"));

  m.def("project",
        [](const ComplexVector& s, int qubit, std::array<double, 4> v, int outcome) {
          const auto r = project(to_state(s), ProjectiveMeasurement{qubit, v, outcome});
          return py::make_tuple(r.state.amplitudes(), r.probability);
        },
        py::arg("state"), py::arg("qubit"), py::arg("v") = std::array<double, 4>{1, 0, 0, 0}, py::arg("outcome") = 0,
        "Post-measurement state and probability for V = t I + i y.sigma.");
  m.def("three_tangle", [](const ComplexVector& s) { return three_tangle(to_state(s)); }, py::arg("state"));
  m.def("classify3", [](const ComplexVector& s) { return std::string(to_string(classify3(to_state(s)))); },
        py::arg("state"));
  m.def("search_mapping",
        [](const ComplexVector& s, int qubit, const std::string& family, int grid) {
          SearchOptions o;
          o.grid = grid;
          py::list out;
          for (const auto& r : search_mapping(to_state(s), qubit, family_of(family), "", o)) {
            py::dict d;
            d["v"] = r.measurement.v_params;
            d["outcome"] = r.measurement.outcome;
            d["probability"] = r.probability;
            d["overlap"] = r.span_overlap;
            d["coefficients"] = r.coefficients;
            d["class"] = std::string(to_string(r.class_label));
            out.append(d);
          }
          return out;
        },
        py::arg("state"), py::arg("qubit"), py::arg("family"), py::arg("grid") = 20);
}
