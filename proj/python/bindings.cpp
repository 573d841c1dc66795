#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "config.hpp"
#include "floquet/asymptotics.hpp"
#include "floquet/bands.hpp"
#include "floquet/fiber.hpp"
#include "floquet/lattice.hpp"
#include "floquet/regions.hpp"
#include "floquet/studies.hpp"
#include "floquet/symbol.hpp"
#include "runner.hpp"

namespace py = pybind11;
using namespace floquet;

PYBIND11_MODULE(pyfloquet, m) {
  m.doc() = "Periodic operators (-Delta)^l + A: fibers, bands and high-energy asymptotics";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<LatticePair>(m, "Lattice")
      .def(py::init(&make_lattice_pair), py::arg("basis"))
      .def_static("standard", &standard_lattice, py::arg("d"))
      .def_readonly("dim", &LatticePair::dim)
      .def_readonly("basis", &LatticePair::basis)
      .def_readonly("dual_basis", &LatticePair::dual_basis)
      .def_readonly("vol_gamma", &LatticePair::vol_gamma);

  py::class_<TrigSymbol>(m, "Symbol")
      .def_readonly("alpha", &TrigSymbol::alpha)
      .def_readonly("norm_L", &TrigSymbol::norm_L)
      .def_readonly("bound_c", &TrigSymbol::bound_c)
      .def("__len__", [](const TrigSymbol& s) { return s.modes.size(); });

  m.def("zero_symbol", &zero_symbol, py::arg("lattice"));
  m.def("cosine_symbol", &cosine_symbol, py::arg("lattice"), py::arg("direction"), py::arg("q"),
        py::arg("alpha") = 0.0, py::arg("R") = 0.0);
  m.def("axis_cosines", &axis_cosines, py::arg("lattice"), py::arg("q"));
  m.def("eval_symbol", &eval_symbol, py::arg("symbol"), py::arg("lattice"), py::arg("x"), py::arg("xi"));

  m.def(
      "fiber_eigenvalues",
      [](const Vec& k, const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff) {
        return fiber_eigenvalues(fiber_basis(k, lat, cutoff), lat, sym, l);
      },
      py::arg("k"), py::arg("lattice"), py::arg("symbol"), py::arg("l"), py::arg("cutoff"));

  py::class_<Band>(m, "Band")
      .def_readonly("j", &Band::j)
      .def_readonly("a", &Band::a)
      .def_readonly("b", &Band::b)
      .def_readonly("refined", &Band::refined);

  py::class_<Gap>(m, "Gap").def_readonly("lo", &Gap::lo).def_readonly("hi", &Gap::hi).def_property_readonly(
      "width", &Gap::width);

  py::class_<BandTable>(m, "BandTable")
      .def_readonly("bands", &BandTable::bands)
      .def_readonly("cutoff", &BandTable::cutoff)
      .def_readonly("reliable_max", &BandTable::reliable_max)
      .def_readonly("endpoint_error", &BandTable::endpoint_error)
      .def("gaps", &detect_gaps, py::arg("lo"), py::arg("hi"));

  m.def("scan_bands", &scan_bands, py::arg("lattice"), py::arg("symbol"), py::arg("l"), py::arg("cutoff"),
        py::arg("grid"), py::arg("keep_eigenvalues") = false);
  m.def("refine_band_edges", &refine_band_edges, py::arg("table"), py::arg("lattice"), py::arg("symbol"),
        py::arg("lo"), py::arg("hi"), py::arg("tol") = 1e-6);
  m.def("coverage_delta", &coverage_delta, py::arg("d"), py::arg("l"), py::arg("rho"), py::arg("c3"));

  py::class_<RegionParams>(m, "RegionParams")
      .def_readwrite("rho", &RegionParams::rho)
      .def_readwrite("l", &RegionParams::l)
      .def_readwrite("alpha", &RegionParams::alpha)
      .def_readwrite("q", &RegionParams::q)
      .def_readwrite("gamma", &RegionParams::gamma)
      .def_readwrite("eps0", &RegionParams::eps0)
      .def_readwrite("M", &RegionParams::M)
      .def_readwrite("R", &RegionParams::R)
      .def_readwrite("L", &RegionParams::L)
      .def_readwrite("subspace_radius", &RegionParams::subspace_radius)
      .def("validate", &RegionParams::validate, py::arg("d"));
  m.def("auto_region_params", &auto_region_params, py::arg("d"), py::arg("l"), py::arg("alpha"), py::arg("rho"),
        py::arg("M"), py::arg("R"), py::arg("L"), py::arg("subspace_radius") = 0.0);

  py::class_<RegionContext>(m, "RegionContext")
      .def(py::init([](const LatticePair& lat, const RegionParams& p) { return make_region_context(lat, p); }),
           py::arg("lattice"), py::arg("params"))
      .def_property_readonly("table_size", [](const RegionContext& c) { return c.table.size(); })
      .def(
          "classify",
          [](const RegionContext& c, const Vec& xi) { return std::string(kind_name(classify_point(xi, c).kind)); },
          py::arg("xi"))
      .def(
          "g",
          [](const RegionContext& c, const TrigSymbol& sym, const Vec& xi) { return g_value(xi, c, sym).g; },
          py::arg("symbol"), py::arg("xi"));

  m.def(
      "run",
      [](const std::string& subcommand, const std::string& config_text) {
        auto cfg = cli::parse_config(config_text);
        cli::finalize(cfg);
        std::string summary;
        return cli::run_subcommand(subcommand, cfg, &summary);
      },
      py::arg("subcommand"), py::arg("config_text"),
      "Runs a CLI subcommand on an INI config string and returns the report text.");
}
