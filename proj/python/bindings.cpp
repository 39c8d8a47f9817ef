#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphctl/graphctl.hpp"

namespace py = pybind11;
using namespace graphctl;

namespace {

struct Graph {
  MetricGraph graph;
  ControlSet omega;

  static Graph from_json(const std::string& text) {
    auto in = parse_graph_json(text);
    return {std::move(in.graph), std::move(in.omega)};
  }
  static Graph scenario(const std::string& name, const std::vector<std::string>& params) {
    auto sc = make_scenario(name, params);
    return {std::move(sc.graph), std::move(sc.omega)};
  }
  NormalizedGraph normalized() const { return normalize(graph, omega); }
};

py::dict ggcc_dict(const Graph& g) {
  const auto v = check_ggcc(g.normalized(), false);
  py::dict criteria;
  for (const auto& [c, ok] : v.criteria) criteria[to_string(c)] = ok;
  py::dict d;
  d["holds"] = v.holds;
  d["criteria_agree"] = v.criteria_agree;
  d["criteria"] = criteria;
  d["L"] = v.ggcc_length ? py::object(py::float_(*v.ggcc_length)) : py::none();
  d["T_star"] = v.optimal_time ? py::object(py::float_(*v.optimal_time)) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Controllability checks, spectra and exact wave simulation on metric graphs.";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalGuardError>(m, "NumericalGuardError", PyExc_ArithmeticError);

  py::class_<Graph>(m, "Graph")
      .def_static("from_json", &Graph::from_json, py::arg("text"))
      .def_static("scenario", &Graph::scenario, py::arg("name"), py::arg("params") = std::vector<std::string>{})
      .def("to_json", [](const Graph& g) { return to_graph_json(g.graph, g.omega); })
      .def_property_readonly("num_edges", [](const Graph& g) { return g.graph.num_edges(); })
      .def_property_readonly("num_vertices", [](const Graph& g) { return g.graph.num_vertices(); })
      .def_property_readonly("total_length", [](const Graph& g) { return g.graph.total_length(); })
      .def("check_ggcc", &ggcc_dict)
      .def("optimal_time",
           [](const Graph& g) -> py::object {
             const auto ot = optimal_watershed_time(g.normalized());
             return ot ? py::object(py::float_(ot->t_star)) : py::none();
           })
      .def(
          "eigenvalues",
          [](const Graph& g, double k_max) {
            std::vector<std::pair<double, int>> out;
            for (const auto& p : eigenvalues(g.graph, k_max).pairs) out.emplace_back(p.k, p.multiplicity);
            return out;
          },
          py::arg("k_max"), "(k, multiplicity) pairs with 0 < k <= k_max")
      .def(
          "observability_ratio",
          [](const Graph& g, double T, const std::string& family) {
            ProbeFamily f = ProbeFamily::All;
            if (family == "grid") f = ProbeFamily::Grid;
            else if (family == "adversarial") f = ProbeFamily::Adversarial;
            else if (family != "all") throw ValidationError("family must be all, grid or adversarial");
            return observability_ratio(g.graph, g.omega, T, f).ratio;
          },
          py::arg("T"), py::arg("family") = "all");

  m.def("scattering_matrix", [](int degree) {
    const auto s = scattering_matrix(degree);
    std::vector<std::vector<double>> out(s.rows(), std::vector<double>(s.cols()));
    for (int i = 0; i < s.rows(); ++i) {
      for (int j = 0; j < s.cols(); ++j) out[i][j] = s(i, j);
    }
    return out;
  });
  m.def(
      "continued_fraction",
      [](const std::string& expr, int depth) { return continued_fraction(parse_number(expr), depth).quotients(); },
      py::arg("expr"), py::arg("depth"));
  m.def(
      "dirichlet_simultaneous",
      [](const std::vector<double>& alphas, std::int64_t N) {
        const auto sa = dirichlet_simultaneous(alphas, N);
        return py::make_tuple(sa.q, sa.p);
      },
      py::arg("alphas"), py::arg("N"), "(q, [p_1, ..., p_d]) with |alpha_j - p_j / q| <= 1 / (q sqrt N)");
}
