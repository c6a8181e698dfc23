#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entvar/report.hpp"

namespace py = pybind11;
using namespace entvar;

namespace {

TransitionMatrix matrix_from_rows(const std::vector<std::vector<int>>& rows) {
  return TransitionMatrix::from_rows(rows);
}

PlanarMap make_planar(const std::string& family, double t) {
  if (family == "horseshoe") return model_horseshoe();
  if (family == "isotopy") return isotopy_map(t, model_horseshoe());
  throw error(errc::config, "unknown planar family: " + family);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropy variation toolkit: subshift spectra, tangency extensions, "
            "model families and separated-set estimates";

  py::register_exception<error>(m, "ToolkitError");

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def(py::init(&matrix_from_rows), py::arg("rows"))
      .def_property_readonly("order", &TransitionMatrix::order)
      .def("at", &TransitionMatrix::at, py::arg("i"), py::arg("j"))
      .def("to_text", &TransitionMatrix::to_text)
      .def_static("from_text", &TransitionMatrix::from_text, py::arg("text"))
      .def("__eq__", [](const TransitionMatrix& a, const TransitionMatrix& b) { return a == b; });

  py::class_<SpectralResult>(m, "SpectralResult")
      .def_readonly("radius", &SpectralResult::radius)
      .def_readonly("entropy", &SpectralResult::entropy)
      .def_readonly("iterations", &SpectralResult::iterations)
      .def_readonly("degenerate", &SpectralResult::degenerate);

  m.def("spectral_radius", &spectral_radius, py::arg("matrix"), py::arg("tol") = 1e-12);
  m.def("is_irreducible", &is_irreducible, py::arg("matrix"));
  m.def("oracle_perron_root", &oracle::perron_root, py::arg("matrix"));
  m.def("char_poly", &oracle::char_poly, py::arg("matrix"),
        "Exact characteristic polynomial coefficients, ascending");

  m.def(
      "extend_matrix",
      [](const TransitionMatrix& H, int n1, int n2) {
        return extend_matrix({H, n1, n2});
      },
      py::arg("H"), py::arg("n1"), py::arg("n2"));
  m.def(
      "entropy_gap",
      [](const TransitionMatrix& H, int n1, int n2) { return entropy_gap({H, n1, n2}); },
      py::arg("H"), py::arg("n1"), py::arg("n2"));
  m.def(
      "perron_chain",
      [](const TransitionMatrix& H, int n1, int n2) {
        const ExtensionSpec spec{H, n1, n2};
        const ChainReport rep = perron_chain(extend_matrix(spec), spec);
        return py::make_tuple(rep.radii, rep.conclusion);
      },
      py::arg("H"), py::arg("n1"), py::arg("n2"),
      "Radii along the minor chain and whether the overall drop is strict");

  py::class_<EntropyEstimate>(m, "EntropyEstimate")
      .def_readonly("value", &EntropyEstimate::value)
      .def_readonly("n", &EntropyEstimate::n)
      .def_readonly("epsilon", &EntropyEstimate::epsilon)
      .def_readonly("cardinalities", &EntropyEstimate::cardinalities)
      .def_readonly("method", &EntropyEstimate::method);

  m.def(
      "separated_entropy",
      [](const std::string& family, int n, double epsilon, int grid, bool refine, double t,
         double tau) {
        const GridSpec g{grid, refine};
        if (family == "ball") return separated_entropy(family_G(tau), n, epsilon, g);
        return separated_entropy(make_planar(family, t), n, epsilon, g);
      },
      py::arg("family"), py::arg("n"), py::arg("epsilon"), py::arg("grid") = 400,
      py::arg("refine") = true, py::arg("t") = 0.0, py::arg("tau") = 0.0);

  m.def(
      "growth_rate",
      [](const std::string& family, int n, int grid, bool refine, double t, double tau) {
        const GridSpec g{grid, refine};
        const GrowthRate R = family == "ball" ? growth_rate(family_G(tau), n, g)
                                              : growth_rate(make_planar(family, t), n, g);
        return py::make_tuple(R.value, R.samples, R.residual);
      },
      py::arg("family"), py::arg("n"), py::arg("grid") = 16, py::arg("refine") = true,
      py::arg("t") = 0.0, py::arg("tau") = 0.0);

  m.def("eps0", &eps0, "Clearance parameter of the isotopy push");
  m.def(
      "yomdin_defect",
      [](double R, int dimM, int k) { return yomdin_defect(R, dimM, k); },
      py::arg("R"), py::arg("dimM"), py::arg("k"));
  m.def("snake_bound", &snake_bound, py::arg("lam"), py::arg("mu") = std::nullopt,
        py::arg("tau") = 1, py::arg("eps") = 0.0);
  m.def(
      "variation_verdict",
      [](const std::vector<double>& pieces, int index, double alpha) {
        const VerdictResult v = variation_verdict(pieces, index, alpha);
        return py::make_tuple(to_string(v.tag), v.gap, v.constantCinf, v.constantCk);
      },
      py::arg("piece_entropies"), py::arg("tangency_index"), py::arg("alpha_k") = 0.0);
  m.def(
      "fixed_points",
      [](double tau, int seeds) {
        std::vector<std::tuple<double, double, double>> out;
        for (const Vec3& p : fixed_points(family_G(tau), seeds))
          out.emplace_back(p.x, p.y, p.z);
        return out;
      },
      py::arg("tau"), py::arg("seeds") = 10);
}
