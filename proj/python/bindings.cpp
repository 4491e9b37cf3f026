#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mrg/cli.hpp"
#include "mrg/error.hpp"
#include "mrg/io.hpp"
#include "mrg/numerics.hpp"
#include "mrg/oscillation.hpp"
#include "mrg/powercount.hpp"

namespace py = pybind11;
using namespace mrg;

namespace {

py::dict verdict_dict(const NodeVerdict& v) {
  py::dict d;
  d["case"] = std::string(to_string(v.bound_case));
  d["omega"] = v.omega;
  d["divergent"] = v.divergent;
  d["logarithmic"] = v.logarithmic;
  d["counterterm"] = std::string(to_string(v.counterterm));
  return d;
}

py::dict topology_dict(const TopologyReport& t) {
  py::dict d;
  d["v"] = t.v;
  d["e"] = t.e;
  d["e0"] = t.e0;
  d["e_kappa"] = t.e_kappa;
  d["f"] = t.f;
  d["k"] = t.k;
  d["chi"] = t.chi;
  d["g"] = t.genus;
  d["b"] = t.broken_faces;
  d["planar"] = t.planar;
  d["regular"] = t.regular;
  d["tree_like"] = t.tree_like;
  return d;
}

py::dict scan_dict(const ScanResult& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["i"] = row.i;
    d["amplitude"] = row.amplitude;
    d["stderr"] = row.stderr_;
    d["abs_amplitude"] = row.abs_amplitude;
    d["abs_stderr"] = row.abs_stderr;
    rows.append(d);
  }
  py::dict d;
  d["rows"] = rows;
  d["slope"] = r.phase_fit.slope;
  d["slope_stderr"] = r.phase_fit.stderr_;
  d["abs_slope"] = r.abs_fit.slope;
  return d;
}

ScanOptions scan_options(std::uint64_t samples, std::uint64_t seed, int imin, int imax) {
  ScanOptions o;
  o.samples = samples;
  o.seed = seed;
  o.imin = imin;
  o.imax = imax;
  return o;
}

}  // namespace

PYBIND11_MODULE(moyal_rg, m) {
  m.doc() = "Ribbon graphs, power counting and slice numerics for the degenerate Moyal model";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (kind, message)
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.kind())), e.what()).ptr());
    }
  });

  py::class_<RibbonGraph>(m, "Graph")
      .def_static("load", [](const std::filesystem::path& p) { return io::read_graph(p); }, py::arg("path"))
      .def_static("parse", &io::parse_graph, py::arg("text"))
      .def_property_readonly("num_vertices", &RibbonGraph::num_vertices)
      .def_property_readonly("num_edges", &RibbonGraph::num_edges)
      .def_property_readonly("num_external_legs", &RibbonGraph::num_external_legs)
      .def("topology", [](const RibbonGraph& g) { return topology_dict(topology(g)); })
      .def("spanning_trees", [](const RibbonGraph& g, std::size_t limit) { return all_spanning_trees(g, limit); },
           py::arg("limit") = 0);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("theta", &ModelParams::theta)
      .def_readwrite("omega", &ModelParams::omega)
      .def_readwrite("mass", &ModelParams::mass)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_readwrite("lambda_", &ModelParams::lambda)
      .def_readwrite("M", &ModelParams::M)
      .def("validate", &ModelParams::validate);

  m.def(
      "classify_node",
      [](int N, int N_kappa, int genus, int broken_faces, bool tree_like, int n_kappa, bool e_kappa_empty) {
        return verdict_dict(classify_node({N, N_kappa, genus, broken_faces, tree_like, n_kappa, e_kappa_empty}));
      },
      py::arg("N"), py::arg("N_kappa") = 0, py::arg("genus") = 0, py::arg("broken_faces") = 1,
      py::arg("tree_like") = true, py::arg("n_kappa") = 0, py::arg("e_kappa_empty") = true);

  m.def("omega_kappa0", &omega_kappa0, py::arg("N"), py::arg("genus"), py::arg("broken_faces"));

  m.def(
      "classify",
      [](const RibbonGraph& g, std::optional<std::filesystem::path> scales, int flat_scale) {
        const auto mu = scales ? io::read_attribution(*scales) : flat_attribution(g, flat_scale);
        py::list out;
        for (const auto& r : classify_graph(g, mu).nodes) {
          auto d = verdict_dict(r.verdict);
          d["level"] = r.level;
          d["k"] = r.index;
          d["N"] = r.data.N;
          d["N_kappa"] = r.data.N_kappa;
          d["tree_like"] = r.data.tree_like;
          out.append(d);
        }
        return out;
      },
      py::arg("graph"), py::arg("scales") = py::none(), py::arg("flat_scale") = 1);

  m.def("propagator_slice", &propagator_slice, py::arg("params"), py::arg("i"), py::arg("p"), py::arg("pr"),
        py::arg("qr"));

  m.def(
      "verify_slice_bound",
      [](const ModelParams& P, int imin, int imax, const std::string& constants) {
        if (constants != "derived" && constants != "unit") throw Error(ErrorKind::InvalidArgument, "constants: " + constants);
        const auto exps = constants == "derived" ? BoundExponents::derived(P) : BoundExponents::unit();
        const auto r = verify_slice_bound(P, exps, imin, imax, default_grid());
        py::dict d;
        d["K"] = r.K;
        d["K_per_slice"] = r.K_per_slice;
        d["variation"] = r.variation;
        return d;
      },
      py::arg("params") = ModelParams{}, py::arg("imin") = 1, py::arg("imax") = 6, py::arg("constants") = "derived");

  m.def(
      "oracle_check",
      [](const RibbonGraph& g, std::size_t trials, std::size_t max_trees, std::uint64_t seed) {
        const auto s = oracle_check(g, {trials, max_trees, seed, false});
        py::dict d;
        d["trees"] = s.trees;
        d["checks"] = s.checks;
        d["matches"] = s.matches;
        d["passed"] = s.passed();
        return d;
      },
      py::arg("graph"), py::arg("trials") = 100, py::arg("max_trees") = 0, py::arg("seed") = 1);

  m.def(
      "scaling_scan",
      [](const RibbonGraph& g, const ModelParams& P, std::uint64_t samples, std::uint64_t seed, int imin, int imax) {
        return scan_dict(scaling_scan(P, g, scan_options(samples, seed, imin, imax)));
      },
      py::arg("graph"), py::arg("params") = ModelParams{}, py::arg("samples") = 100000, py::arg("seed") = 1,
      py::arg("imin") = 1, py::arg("imax") = 6);

  m.def(
      "kappa_chain_scan",
      [](const ModelParams& P, std::uint64_t samples, std::uint64_t seed, int imin, int imax) {
        return scan_dict(kappa_chain_scan(P, scan_options(samples, seed, imin, imax)));
      },
      py::arg("params") = ModelParams{}, py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("imin") = 1,
      py::arg("imax") = 6);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "mrg");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (exit code, stdout, stderr).");
}
