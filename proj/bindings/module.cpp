#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wbrm/errors.hpp"
#include "wbrm/npt.hpp"
#include "wbrm/shapes.hpp"
#include "wbrm/spectrum.hpp"
#include "wbrm/theory.hpp"
#include "wbrm/wbrm_model.hpp"

namespace py = pybind11;
using namespace wbrm;

namespace {

py::dict region_to_dict(const NptRegion& r) {
    py::dict d;
    d["p1"] = r.p1;
    d["p2"] = r.p2;
    d["width"] = r.width();
    d["shoulder_lo"] = py::make_tuple(r.shoulder_lo.first, r.shoulder_lo.second);
    d["shoulder_hi"] = py::make_tuple(r.shoulder_hi.first, r.shoulder_hi.second);
    d["method"] = npt_method_name(r.method);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "NPT-region widths of banded random-matrix eigenfunctions";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ResonanceError>(m, "ResonanceError", PyExc_ArithmeticError);

    py::class_<WbrmInstance>(m, "Instance")
        .def_property_readonly("n", [](const WbrmInstance& i) { return i.n; })
        .def_property_readonly("b", [](const WbrmInstance& i) { return i.b; })
        .def_property_readonly("lam", [](const WbrmInstance& i) { return i.lambda; })
        .def_property_readonly("seed", [](const WbrmInstance& i) { return i.seed; })
        .def("to_json", &instance_to_json)
        .def("__repr__", [](const WbrmInstance& i) {
            return "Instance(n=" + std::to_string(i.n) + ", b=" + std::to_string(i.b) +
                   ", lam=" + std::to_string(i.lambda) + ")";
        });

    m.def("generate", &generate_wbrm, py::arg("n"), py::arg("b"), py::arg("lam"), py::arg("seed"),
          "Generate a reproducible banded random-matrix realization");
    m.def("instance_from_json", &instance_from_json);
    m.def("hamiltonian_dense",
          [](const WbrmInstance& inst) { return hamiltonian(inst).dense(); },
          "H = H0 + lam*V as a dense array");
    m.def("diagonalize",
          [](const WbrmInstance& inst, int dense_limit) {
              const SpectrumResult s = diagonalize(hamiltonian(inst), dense_limit);
              return py::make_tuple(s.energies, s.components);
          },
          py::arg("inst"), py::arg("dense_limit") = 4000,
          "Returns (energies, components) with components[a, k] = <k|a>");
    m.def("eigenvalues",
          [](const WbrmInstance& inst) { return eigenvalues_banded(hamiltonian(inst)); });

    m.def("npt_oracle",
          [](const WbrmInstance& inst, double e) { return region_to_dict(npt_oracle(inst, e)); },
          py::arg("inst"), py::arg("e_alpha"));
    m.def("npt_iterative",
          [](const WbrmInstance& inst, double e) { return region_to_dict(npt_iterative(inst, e)); },
          py::arg("inst"), py::arg("e_alpha"));
    m.def("spectral_radius", [](const Eigen::MatrixXd& m_) { return spectral_radius(m_); });

    m.def("quartic_s",
          [](const std::array<double, 4>& v, double f, double lam) {
              return quartic_s(quartic_coeffs(v, f, lam));
          },
          py::arg("v"), py::arg("f"), py::arg("lam"));
    m.def("assemble_u_up", &assemble_u_up, py::arg("v"), py::arg("f"), py::arg("lam"));
    m.def("x_statistic", &x_statistic, py::arg("v"), py::arg("f"));
    m.def("mean_np_small", &mean_np_small, py::arg("lam"), py::arg("c"), py::arg("beta"));
    m.def("mean_np_large", &mean_np_large, py::arg("lam"), py::arg("c_prime"));
    m.def("erfc", &erfc_cf);

    m.def("localization_length", &localization_length);
    m.def("ef_profile",
          [](const Eigen::VectorXd& energies, const Eigen::MatrixXd& components, double lo, double hi) {
              SpectrumResult s{energies, components};
              std::vector<const SpectrumResult*> views{&s};
              return averaged_ef_shape(views, SpectralWindow{lo, hi}).bins;
          },
          py::arg("energies"), py::arg("components"), py::arg("lo_frac") = 0.25,
          py::arg("hi_frac") = 0.75, "Averaged EF shape as {bin_center: intensity}");
    m.def("half_width", [](const std::map<int, double>& bins) {
        ShapeProfile p;
        p.count = 1;
        p.bins = bins;
        return half_width(p);
    });
}
