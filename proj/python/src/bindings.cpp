#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "curvegraph/bounds.hpp"
#include "curvegraph/cli.hpp"
#include "curvegraph/curvature.hpp"
#include "curvegraph/error.hpp"
#include "curvegraph/generators.hpp"
#include "curvegraph/io.hpp"
#include "curvegraph/isoperimetry.hpp"
#include "curvegraph/spectral.hpp"

namespace py = pybind11;
using namespace curvegraph;

namespace {

MeasureMode measure_from(const py::object& m) {
  if (py::isinstance<py::str>(m)) {
    const auto text = m.cast<std::string>();
    if (text == "explicit") return MeasureMode::explicit_values({});
    return MeasureMode::parse(text);
  }
  return MeasureMode::explicit_values(m.cast<std::vector<double>>());
}

Dimension dimension_from(double n) {
  return std::isinf(n) ? Dimension::infinite() : Dimension::finite(n);
}

FamilyTag family_from(const std::string& name, const py::kwargs& kw) {
  auto get = [&](const char* key, auto fallback) {
    return kw.contains(key) ? kw[key].cast<decltype(fallback)>() : fallback;
  };
  auto need = [&](const char* key) {
    if (!kw.contains(key)) throw Error(ErrorCode::InvalidParameter, name + " needs " + key);
    return kw[key].cast<std::size_t>();
  };
  if (name == "cycle") return family::Cycle{need("n")};
  if (name == "complete") return family::Complete{need("n")};
  if (name == "path") return family::Path{need("n")};
  if (name == "dumbbell") return family::Dumbbell{need("n")};
  if (name == "mimura") return family::MimuraProduct{need("n")};
  if (name == "hypercube") return family::Hypercube{need("d")};
  if (name == "cayley") {
    return family::AbelianCayley{kw["orders"].cast<std::vector<std::size_t>>(),
                                 kw["generators"].cast<std::vector<std::vector<long>>>()};
  }
  if (name == "triangle") {
    return family::Triangle{get("a", 1.0), get("b", 1.0), get("c", 1.0),
                            get("A", 1.0), get("B", 1.0), get("C", 1.0)};
  }
  if (name == "tetrahedron") {
    return family::Tetrahedron{get("a", 1.0), get("b", 1.0), get("c", 1.0), get("A", 1.0)};
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family \"" + name + "\"");
}

py::dict multiway_dict(const SubpartitionResult& r) {
  py::dict d;
  d["k"] = r.k;
  d["value"] = r.value;
  py::list sets;
  for (const auto& s : r.witness) sets.append(py::cast(s.members()));
  d["witness"] = sets;
  return d;
}

}  // namespace

PYBIND11_MODULE(_curvegraph, m) {
  m.doc() = "Bakry-Emery curvature, spectra and isoperimetric constants of weighted graphs";

  py::register_exception<Error>(m, "CurvegraphError", PyExc_ValueError);

  py::class_<WeightedGraph>(m, "Graph")
      .def_property_readonly("size", &WeightedGraph::size)
      .def_property_readonly("family", &WeightedGraph::family)
      .def_property_readonly("fingerprint", &WeightedGraph::fingerprint)
      .def_property_readonly("labels", &WeightedGraph::labels)
      .def_property_readonly("measures", &WeightedGraph::measures)
      .def_property_readonly("edges",
                             [](const WeightedGraph& g) {
                               std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
                               return out;
                             })
      .def("laplacian", [](const WeightedGraph& g) { return laplacian_matrix(g); })
      .def("to_json", [](const WeightedGraph& g) { return dump(graph_to_json(g)); })
      .def("__len__", &WeightedGraph::size)
      .def("__repr__", [](const WeightedGraph& g) {
        return "<Graph " + g.family() + " with " + std::to_string(g.size()) + " vertices>";
      });

  m.def(
      "generate",
      [](const std::string& family, const py::object& measure, const py::kwargs& kw) {
        return generate({family_from(family, kw), measure_from(measure)});
      },
      py::arg("family"), py::arg("measure") = "unit",
      "Built-in family: cycle, complete, path, dumbbell, mimura (n=), hypercube (d=), "
      "cayley (orders=, generators=), triangle, tetrahedron (a=, b=, ...).");
  m.def(
      "build_graph",
      [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
         const py::object& measure) {
        std::vector<Edge> es;
        for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
        return build_graph(n, es, measure_from(measure));
      },
      py::arg("n"), py::arg("edges"), py::arg("measure") = "unit");
  m.def(
      "from_json", [](const std::string& text) { return graph_from_json(Json::parse(text)).graph; },
      py::arg("text"));
  m.def("product", [](const WeightedGraph& a, const WeightedGraph& b, const py::object& measure) {
    return cartesian_product(a, b, measure_from(measure));
  }, py::arg("a"), py::arg("b"), py::arg("measure") = "unit");

  m.def(
      "spectrum",
      [](const WeightedGraph& g) {
        auto d = decompose(g);
        return py::make_tuple(d.eigenvalues, d.eigenfunctions);
      },
      py::arg("g"), "Eigenvalues (ascending) and mu-orthonormal eigenfunctions.");
  m.def(
      "heat",
      [](const WeightedGraph& g, const Eigen::VectorXd& f, double t) {
        return heat_apply(decompose(g), f, t);
      },
      py::arg("g"), py::arg("f"), py::arg("t"));

  m.def("gamma", [](const WeightedGraph& g, const Eigen::VectorXd& f) { return gamma(g, f); },
        py::arg("g"), py::arg("f"));
  m.def("gamma2", &gamma2_value, py::arg("g"), py::arg("f"), py::arg("x"));
  m.def(
      "curvature",
      [](const WeightedGraph& g, std::size_t x, double n) {
        return curvature_value(g, x, dimension_from(n)).value;
      },
      py::arg("g"), py::arg("x"), py::arg("n") = std::numeric_limits<double>::infinity());
  m.def(
      "curvature_profile",
      [](const WeightedGraph& g, double n) {
        std::vector<double> out;
        for (const auto& c : curvature_profile(g, dimension_from(n))) out.push_back(c.value);
        return out;
      },
      py::arg("g"), py::arg("n") = std::numeric_limits<double>::infinity());
  m.def(
      "cd_check",
      [](const WeightedGraph& g, double K, double n) {
        const auto r = cd_check_graph(g, K, dimension_from(n));
        return py::make_tuple(r.holds, r.failing_vertices());
      },
      py::arg("g"), py::arg("K"), py::arg("n") = std::numeric_limits<double>::infinity(),
      "Returns (holds, failing vertices).");

  m.def(
      "multiway",
      [](const WeightedGraph& g, std::size_t k, const std::string& mode, double budget) {
        if (mode != "subpartition" && mode != "partition") {
          throw Error(ErrorCode::InvalidParameter, "mode must be subpartition or partition");
        }
        const auto pm = mode == "partition" ? PartitionMode::Partition : PartitionMode::Subpartition;
        return multiway_dict(multiway_constant(g, k, pm, budget));
      },
      py::arg("g"), py::arg("k"), py::arg("mode") = "subpartition",
      py::arg("budget") = kEnumerationBudget);
  m.def(
      "cheeger",
      [](const WeightedGraph& g, std::uint64_t max_sets) -> py::object {
        auto r = cheeger_constant(g, max_sets);
        if (!r) return py::none();
        return multiway_dict(*r);
      },
      py::arg("g"), py::arg("max_sets") = 20'000'000);

  m.def(
      "report_json",
      [](const WeightedGraph& g, std::size_t k_max, std::uint64_t seed, bool force,
         std::optional<double> genus, double budget) {
        ReportOptions o;
        o.seed = seed;
        o.force = force;
        o.genus_bound = genus;
        o.budget = budget;
        BoundsReport r;
        {
          py::gil_scoped_release release;
          r = full_report(g, k_max, o);
        }
        return dump(report_to_json(r));
      },
      py::arg("g"), py::arg("k_max") = 4, py::arg("seed") = 42, py::arg("force") = false,
      py::arg("genus") = py::none(), py::arg("budget") = kEnumerationBudget);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line interface in-process; returns (code, stdout, stderr).");
}
