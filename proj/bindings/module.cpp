// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "helmpml/bessel.hpp"
#include "helmpml/experiments.hpp"
#include "helmpml/oracles.hpp"
#include "helmpml/torus.hpp"

namespace py = pybind11;
using namespace helmpml;

namespace {

PmlSetup make_setup(double R1, double R2, double theta, int dim, double R_tr) {
  return PmlSetup(ScalingFunction::smooth_step_profile(R1, R2), theta, dim, R_tr);
}

}  // namespace

PYBIND11_MODULE(_helmpml, m) {
  m.doc() = "2D Helmholtz solver with radial PML truncation: coefficient "
            "algebra, special-function oracles and torus multiplier calculus";

  py::class_<ScalingFunction>(m, "ScalingFunction")
      .def_static("smooth_step", &ScalingFunction::smooth_step_profile,
                  py::arg("R1"), py::arg("R2"))
      .def("evaluate",
           [](const ScalingFunction& s, double r) {
             const auto e = s.eval(r);
             return py::make_tuple(e.f, e.df, e.ddf);
           },
           py::arg("r"), "returns (f, f', f'')");

  py::class_<PmlSetup>(m, "PmlSetup")
      .def(py::init(&make_setup), py::arg("R1"), py::arg("R2"), py::arg("theta"),
           py::arg("dim") = 2, py::arg("R_tr") = 1.5);

  py::class_<MediumSpec>(m, "MediumSpec")
      .def_static("homogeneous", &MediumSpec::homogeneous, py::arg("R_scat"))
      .def_static("radial_bump", &MediumSpec::radial_bump, py::arg("R_scat"),
                  py::arg("amp"), py::arg("lo"), py::arg("hi"));

  m.def(
      "pml_tensor",
      [](const PmlSetup& setup, const MediumSpec& medium, double x, double y,
         double z) {
        const auto s = pml_tensor(setup, medium, {x, y, z});
        const int d = setup.dim();
        std::vector<std::vector<Complex>> A(
            static_cast<size_t>(d),
            std::vector<Complex>(static_cast<size_t>(d)));
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) A[size_t(i)][size_t(j)] = s.A(i, j);
        py::dict out;
        out["alpha"] = s.alpha;
        out["beta"] = s.beta;
        out["A"] = A;
        out["c_inv2"] = s.c_inv2;
        return out;
      },
      py::arg("setup"), py::arg("medium"), py::arg("x"), py::arg("y"),
      py::arg("z") = 0.0);

  m.def("re_part_spectrum",
        [](const PmlSetup& setup, double r) { return re_part_spectrum(setup, r); },
        py::arg("setup"), py::arg("r"));

  m.def(
      "plane_wave_consistency_residual",
      [](const PmlSetup& setup, const MediumSpec& medium, double k, double ax,
         double ay, double x, double y) {
        const auto u = plane_wave_field(k, {ax, ay, 0.0}, setup.dim());
        return operator_consistency_residual(setup, medium, u, {x, y, 0.0});
      },
      py::arg("setup"), py::arg("medium"), py::arg("k"), py::arg("ax"),
      py::arg("ay"), py::arg("x"), py::arg("y"));

  m.def("bessel_pair",
        [](int n, double z) {
          const auto p = bessel::bessel_pair(n, z);
          return py::make_tuple(p.J, p.dJ, p.Y, p.dY);
        },
        py::arg("n"), py::arg("z"), "returns (J_n, J_n', Y_n, Y_n')");

  m.def("dtn_coefficient", &bessel::dtn_coefficient, py::arg("n"), py::arg("k"),
        py::arg("R"));

  m.def(
      "disk_scattering_total_field",
      [](double k, double a, double phi_inc,
         const std::vector<std::pair<double, double>>& pts) {
        std::vector<Point> p;
        p.reserve(pts.size());
        for (const auto& [x, y] : pts) p.push_back({x, y, 0.0});
        return oracles::disk_scattering_total_field(k, a, phi_inc, p);
      },
      py::arg("k"), py::arg("a"), py::arg("phi_inc"), py::arg("points"));

  m.def(
      "pml_truncation_ratio",
      [](double k, const PmlSetup& setup, double R_scat, int ring_n) {
        const auto medium = MediumSpec::homogeneous(R_scat);
        const double R1 = setup.R1();
        const auto src = oracles::SourceSpec::ring(ring_n, [R_scat, R1](double r) {
          return Complex(smooth_bump((r - R_scat) / (R1 - R_scat)), 0.0);
        });
        return oracles::pml_truncation_error(k, setup, medium, src).ratio;
      },
      py::arg("k"), py::arg("setup"), py::arg("R_scat") = 0.5,
      py::arg("ring_n") = 1);

  py::class_<torus::TorusGrid>(m, "TorusGrid")
      .def(py::init<double, int, int>(), py::arg("R_sharp"), py::arg("N"),
           py::arg("d") = 2)
      .def_static("suggest_N", &torus::TorusGrid::suggest_N, py::arg("R_sharp"),
                  py::arg("k"))
      .def("resolves", &torus::TorusGrid::resolves, py::arg("k"));

  m.def(
      "apply_multiplier",
      [](const torus::TorusGrid& grid, std::vector<Complex> values,
         const std::function<double(double)>& f, double k) {
        const torus::TorusField field(grid, std::move(values));
        return torus::apply_multiplier(field, {f, k}).values();
      },
      py::arg("grid"), py::arg("values"), py::arg("f"), py::arg("k"));

  m.def(
      "low_pass_split",
      [](const torus::TorusGrid& grid, std::vector<Complex> values, double mu,
         double k) {
        const torus::TorusField field(grid, std::move(values));
        const auto cut = torus::build_cutoffs(mu);
        auto low = torus::apply_multiplier(field, {cut.psi_mu, k});
        auto high = torus::apply_multiplier(
            field, {[&cut](double t) { return 1.0 - cut.psi_mu(t); }, k});
        return py::make_tuple(low.values(), high.values());
      },
      py::arg("grid"), py::arg("values"), py::arg("mu"), py::arg("k"));

  m.def("eval_eta_bound", &experiments::eval_eta_bound, py::arg("h"), py::arg("p"),
        py::arg("k"), py::arg("M"), py::arg("sigma"), py::arg("C1"), py::arg("C2"),
        py::arg("CN"), py::arg("N"));
}
