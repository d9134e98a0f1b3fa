// Python bindings. Structured values cross the boundary as JSON text; the
// mhdcert package wraps them into dicts.

#include <map>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mhd/beltrami.hpp"
#include "mhd/bilinear.hpp"
#include "mhd/certifier.hpp"
#include "mhd/constants.hpp"
#include "mhd/errors.hpp"
#include "mhd/field_io.hpp"
#include "mhd/integrator.hpp"
#include "mhd/spectral.hpp"
#include "mhd/stability.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

mhd::ConstantsTable table_from(const std::string& text) { return mhd::ConstantsTable::from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Galerkin MHD on the torus: fields, bilinear maps, integration and certificates";

  auto input_error = py::register_exception<mhd::InputError>(m, "InputError", PyExc_ValueError);
  auto numerical_error = py::register_exception<mhd::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<mhd::RefinementError>(m, "RefinementError", numerical_error.ptr());
  py::register_exception<mhd::AdmissibilityError>(m, "AdmissibilityError", input_error.ptr());

  py::class_<mhd::SpectralField>(m, "SpectralField")
      .def(py::init<int, int>(), py::arg("dim"), py::arg("cutoff"))
      .def_static("from_json", [](const std::string& s) { return mhd::field_from_json(json::parse(s)); })
      .def("to_json", [](const mhd::SpectralField& f) { return mhd::field_to_json(f).dump(); })
      .def_property_readonly("dim", &mhd::SpectralField::dim)
      .def_property_readonly("cutoff", &mhd::SpectralField::cutoff)
      .def_property_readonly("mode_count", &mhd::SpectralField::mode_count)
      .def("coefficient", [](const mhd::SpectralField& f, std::vector<int> k) {
        return f.coefficient(mhd::WaveVector(std::move(k)));
      })
      .def("set_coefficient", [](mhd::SpectralField& f, std::vector<int> k, std::vector<mhd::Complex> v) {
        f.set_coefficient(mhd::WaveVector(std::move(k)), v);
      })
      .def("with_cutoff", &mhd::SpectralField::with_cutoff)
      .def("__add__", [](const mhd::SpectralField& a, const mhd::SpectralField& b) { return a + b; })
      .def("__sub__", [](const mhd::SpectralField& a, const mhd::SpectralField& b) { return a - b; })
      .def("__mul__", [](const mhd::SpectralField& a, double s) { return s * a; })
      .def("__rmul__", [](const mhd::SpectralField& a, double s) { return s * a; });

  py::class_<mhd::FieldPair>(m, "FieldPair")
      .def(py::init<mhd::SpectralField, mhd::SpectralField>(), py::arg("velocity"), py::arg("magnetic"))
      .def(py::init<int, int>(), py::arg("dim"), py::arg("cutoff"))
      .def_static("from_json", [](const std::string& s) { return mhd::pair_from_json(json::parse(s)); })
      .def("to_json", [](const mhd::FieldPair& p) { return mhd::pair_to_json(p).dump(); })
      .def_readwrite("velocity", &mhd::FieldPair::velocity)
      .def_readwrite("magnetic", &mhd::FieldPair::magnetic)
      .def_property_readonly("dim", &mhd::FieldPair::dim)
      .def_property_readonly("cutoff", &mhd::FieldPair::cutoff)
      .def("__add__", [](const mhd::FieldPair& a, const mhd::FieldPair& b) { return a + b; })
      .def("__sub__", [](const mhd::FieldPair& a, const mhd::FieldPair& b) { return a - b; })
      .def("__mul__", [](const mhd::FieldPair& a, double s) { return s * a; })
      .def("__rmul__", [](const mhd::FieldPair& a, double s) { return s * a; });

  m.def("sobolev_norm", &mhd::sobolev_norm, py::arg("field"), py::arg("p"));
  m.def("pair_norm", &mhd::pair_norm, py::arg("pair"), py::arg("p"));
  m.def("leray_project", &mhd::leray_project);
  m.def("random_field", &mhd::random_field, py::arg("seed"), py::arg("dim"), py::arg("cutoff"),
        py::arg("spectrum_decay") = 1.0);
  m.def("validate", [](const mhd::SpectralField& f, double tol) {
    const auto r = mhd::validate(f, tol);
    return py::dict(py::arg("ok") = r.ok(), py::arg("divergence_residual") = r.divergence_residual,
                    py::arg("mean_zero") = r.mean_zero, py::arg("findings") = r.findings);
  }, py::arg("field"), py::arg("tolerance") = 1e-12);

  m.def("advect", &mhd::advect);
  m.def("P", [](const mhd::SpectralField& v, const mhd::SpectralField& w) { return mhd::P(v, w); });
  m.def("P_mhd", &mhd::P_mhd);
  m.def("P_mhd_pseudo", &mhd::P_mhd_pseudo, py::arg("V"), py::arg("W"), py::arg("out_cutoff"));

  m.def("make_gb_pair", [](const std::string& spec, int cutoff) {
    const auto gb = mhd::make_gb_pair(mhd::BeltramiPairSpec::from_json(json::parse(spec)), cutoff);
    return py::make_tuple(gb.pair, gb.kappa, gb.lambda);
  }, py::arg("spec_json"), py::arg("cutoff"));
  m.def("verify_gb_pair", [](const mhd::FieldPair& p) { return mhd::verify_gb_pair(p).to_json().dump(); });
  m.def("exact_solution", &mhd::exact_solution, py::arg("pair0"), py::arg("nu"), py::arg("eta"), py::arg("t"));

  m.def("integrate", [](const mhd::FieldPair& pair0, double nu, double eta, double dt, double t_end,
                        std::vector<double> orders, int stride, bool pseudo) {
    mhd::SolverConfig c;
    c.nu = nu;
    c.eta = eta;
    c.dt = dt;
    c.t_end = t_end;
    c.cutoff = pair0.cutoff();
    c.recorded_orders = std::move(orders);
    c.record_stride = stride;
    c.pseudo_spectral = pseudo;
    py::gil_scoped_release release;
    return mhd::integrate(pair0, c);
  }, py::arg("pair0"), py::arg("nu"), py::arg("eta"), py::arg("dt"), py::arg("t_end"),
     py::arg("orders") = std::vector<double>{0.0}, py::arg("stride") = 1, py::arg("pseudo_spectral") = true);

  py::class_<mhd::Trajectory>(m, "Trajectory")
      .def_readonly("times", &mhd::Trajectory::times)
      .def_readonly("orders", &mhd::Trajectory::orders)
      .def_readonly("snapshot_times", &mhd::Trajectory::snapshot_times)
      .def_readonly("snapshots", &mhd::Trajectory::snapshots)
      .def("norm_series", [](const mhd::Trajectory& t, double p) {
        const auto s = t.norm_series(p);
        return std::vector<double>(s.begin(), s.end());
      })
      .def("to_csv", &mhd::Trajectory::to_csv);

  m.def("analytic_constants", [](int dim, std::vector<std::pair<double, double>> orders) {
    return mhd::analytic_constants(dim, orders).to_json().dump();
  });
  m.def("required_constant_orders", &mhd::required_constant_orders, py::arg("n"), py::arg("p_list"));

  m.def("certify", [](const mhd::Trajectory& approx, std::map<double, double> delta, double n,
                      std::vector<double> p_list, const std::string& constants, bool galerkin) {
    mhd::CertifyOptions opts;
    opts.galerkin_residual = galerkin;
    const auto table = table_from(constants);
    py::gil_scoped_release release;
    return mhd::certify(approx, delta, n, p_list, table, opts).to_json().dump();
  }, py::arg("approx"), py::arg("datum_error"), py::arg("n"), py::arg("p_list"), py::arg("constants_json"),
     py::arg("galerkin_residual") = false);

  m.def("stability_radius", [](std::map<double, double> J, double n, double mu, const std::string& constants) {
    mhd::DecayBudget budget;
    for (const auto& [p, v] : J) budget.set(p, v, "user");
    return mhd::stability_radius(budget, n, mu, table_from(constants));
  }, py::arg("budget"), py::arg("n"), py::arg("mu"), py::arg("constants_json"));
}
