#include "mwlab/bmo.hpp"
#include "mwlab/generators.hpp"
#include "mwlab/lab/config.hpp"
#include "mwlab/lab/report.hpp"
#include "mwlab/lab/suites.hpp"
#include "mwlab/norms.hpp"
#include "mwlab/orlicz.hpp"
#include "mwlab/weights.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mwlab;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Mat> cells_from(const GridSpec& grid, const CArray& a) {
  if (a.ndim() != 3 || a.shape(1) > kMaxMatrixSize || a.shape(2) > kMaxMatrixSize)
    throw SizeError("expected an array of shape (cells, rows, cols) with rows, cols <= 8");
  if (a.shape(0) != grid.cell_count()) throw SizeError("array has the wrong number of cells for the grid");
  const auto r = a.unchecked<3>();
  std::vector<Mat> out(grid.cell_count(), Mat(a.shape(1), a.shape(2)));
  for (py::ssize_t c = 0; c < a.shape(0); ++c)
    for (py::ssize_t i = 0; i < a.shape(1); ++i)
      for (py::ssize_t j = 0; j < a.shape(2); ++j) out[c](i, j) = r(c, i, j);
  return out;
}

CArray to_array(const std::vector<Mat>& cells) {
  const py::ssize_t rows = cells.empty() ? 0 : cells[0].rows(), cols = cells.empty() ? 0 : cells[0].cols();
  CArray out({static_cast<py::ssize_t>(cells.size()), rows, cols});
  auto w = out.mutable_unchecked<3>();
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (py::ssize_t i = 0; i < rows; ++i)
      for (py::ssize_t j = 0; j < cols; ++j) w(c, i, j) = cells[c](i, j);
  return out;
}

std::vector<double> to_vector(const RArray& a) { return {a.data(), a.data() + a.size()}; }

Czo czo_from(const std::string& name) {
  if (name == "hilbert") return Czo::hilbert();
  if (name == "riesz1") return Czo::riesz(0);
  if (name == "riesz2") return Czo::riesz(1);
  throw ConfigError("unknown operator '" + name + "' (hilbert, riesz1, riesz2)");
}

NormOptions norm_options(int restarts, std::uint64_t seed) {
  NormOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

py::dict estimate_dict(const NormEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["mode"] = e.mode_name();
  d["iterations"] = e.iterations;
  d["residual"] = e.residual;
  d["converged"] = e.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mwlab, m) {
  m.doc() = "Matrix-weight laboratory: A_p characteristics, weighted BMO, commutator norms";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<WeightError>(m, "WeightError", PyExc_ValueError);

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](int dimension, int depth) {
             GridSpec g{dimension, depth};
             g.validate();
             return g;
           }),
           py::arg("dimension"), py::arg("depth"))
      .def_readonly("dimension", &GridSpec::dimension)
      .def_readonly("depth", &GridSpec::depth)
      .def_property_readonly("cells_per_axis", &GridSpec::cells_per_axis)
      .def_property_readonly("cell_count", &GridSpec::cell_count)
      .def("cell_center", &GridSpec::cell_center)
      .def("__repr__", [](const GridSpec& g) {
        return "Grid(dimension=" + std::to_string(g.dimension) + ", depth=" + std::to_string(g.depth) + ")";
      });

  py::class_<MatrixWeight>(m, "MatrixWeight")
      .def(py::init([](const GridSpec& grid, const CArray& cells) { return MatrixWeight(grid, cells_from(grid, cells)); }),
           py::arg("grid"), py::arg("cells"))
      .def_static(
          "identity", [](const GridSpec& grid, int n) { return MatrixWeight::identity(grid, n); }, py::arg("grid"),
          py::arg("n"))
      .def_static(
          "scalar", [](const GridSpec& grid, const RArray& v) { return MatrixWeight::scalar(grid, to_vector(v)); },
          py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &MatrixWeight::grid)
      .def_property_readonly("size", &MatrixWeight::size)
      .def("power", &MatrixWeight::power, py::arg("s"))
      .def("to_numpy", [](const MatrixWeight& w) { return to_array(w.as_field().cells()); });

  py::class_<MatrixField>(m, "MatrixField")
      .def(py::init([](const GridSpec& grid, const CArray& cells) { return MatrixField(grid, cells_from(grid, cells)); }),
           py::arg("grid"), py::arg("cells"))
      .def_property_readonly("grid", &MatrixField::grid)
      .def("to_numpy", [](const MatrixField& b) { return to_array(b.cells()); });

  m.def(
      "rotated_weight",
      [](const GridSpec& grid, int n, double amplitude, double angle_amplitude, std::uint64_t seed, double p) {
        WeightSpec spec;
        spec.kind = "rotated";
        spec.amplitude = amplitude;
        spec.angle_amplitude = angle_amplitude;
        return generate_weight(grid, n, spec, seed, p);
      },
      py::arg("grid"), py::arg("n"), py::arg("amplitude") = 0.8, py::arg("angle_amplitude") = 1.5,
      py::arg("seed") = 1, py::arg("p") = 2.0);
  m.def(
      "smooth_symbol",
      [](const GridSpec& grid, int n, double amplitude, std::uint64_t seed) {
        SymbolSpec spec;
        spec.kind = "smooth";
        spec.amplitude = amplitude;
        return generate_symbol(grid, n, spec, seed);
      },
      py::arg("grid"), py::arg("n"), py::arg("amplitude") = 1.0, py::arg("seed") = 1);

  m.def(
      "ap_characteristic",
      [](const MatrixWeight& w, double p, bool dual) {
        return ap_characteristic(w, p, CubeFamily::all_shifts(w.grid()), dual).value;
      },
      py::arg("w"), py::arg("p"), py::arg("dual") = false,
      "sup over all shifted dyadic cubes of the local A_p expression");
  m.def(
      "ainfty_scalar",
      [](const MatrixWeight& w, double p) { return ainfty_scalar(w, p, CubeFamily::all_shifts(w.grid())); },
      py::arg("w"), py::arg("p"));
  m.def(
      "bmo_vu",
      [](const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p) {
        return bmo_vu(b, u, v, p, CubeFamily::all_shifts(b.grid())).value;
      },
      py::arg("b"), py::arg("u"), py::arg("v"), py::arg("p"));
  m.def(
      "bmo_tilde",
      [](const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p, bool dual) {
        return bmo_tilde(b, u, v, p, CubeFamily::all_shifts(b.grid()), dual ? Orientation::dual : Orientation::primal)
            .value;
      },
      py::arg("b"), py::arg("u"), py::arg("v"), py::arg("p"), py::arg("dual") = false);
  m.def(
      "bloom_bmo",
      [](const GridSpec& grid, const RArray& b, const RArray& u, const RArray& v, double p) {
        return bloom_scalar(to_vector(b), to_vector(u), to_vector(v), p, CubeFamily::all_shifts(grid)).value;
      },
      py::arg("grid"), py::arg("b"), py::arg("u"), py::arg("v"), py::arg("p"));
  m.def(
      "commutator_norm",
      [](const MatrixField& b, const MatrixWeight& u, const MatrixWeight& v, double p, const std::string& op,
         int restarts, std::uint64_t seed) {
        return estimate_dict(commutator_norm(b, czo_from(op), u, v, p, norm_options(restarts, seed)));
      },
      py::arg("b"), py::arg("u"), py::arg("v"), py::arg("p") = 2.0, py::arg("operator") = "hilbert",
      py::arg("restarts") = 32, py::arg("seed") = 1);

  m.def(
      "luxemburg_power",
      [](const RArray& values, double r) { return luxemburg(to_vector(values), YoungFunction::power(r)); },
      py::arg("values"), py::arg("r"), "Luxemburg norm for C(t) = t^r / r");
  m.def(
      "luxemburg_bump",
      [](const RArray& values, double r, double delta) {
        return luxemburg(to_vector(values), YoungFunction::power_log_bump(r, delta));
      },
      py::arg("values"), py::arg("r"), py::arg("delta"), "Luxemburg norm for C(t) = t^r log(e + t)^delta");

  m.def("suite_names", &lab::suite_names);
  m.def(
      "default_config", [](const std::string& suite) { return lab::to_json(lab::default_config(suite)); },
      py::arg("suite"), "default configuration of a suite as a JSON string");
  m.def(
      "run_suite",
      [](const std::string& suite, const std::string& overrides) {
        const lab::ExperimentConfig c = lab::apply_json(lab::default_config(suite), overrides);
        lab::ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = lab::run_suite(c);
        }
        return lab::to_json(r);
      },
      py::arg("suite"), py::arg("overrides") = "{}", "runs a suite and returns its JSON report");
}
