#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifsthermo/errors.hpp"
#include "ifsthermo/gibbs.hpp"
#include "ifsthermo/hoelder.hpp"
#include "ifsthermo/ifs.hpp"
#include "ifsthermo/potential.hpp"
#include "ifsthermo/thermo.hpp"

namespace py = pybind11;
using namespace ifsthermo;

namespace {

IfsSpec nonlinear(const std::vector<std::tuple<double, double, double>>& params) {
  IfsSpec spec;
  for (const auto& [c, d, e] : params) spec.maps.emplace_back(QuadraticMap{c, d, e});
  return spec;
}

IfsSpec affine(const std::vector<std::pair<double, double>>& maps, std::pair<double, double> domain) {
  std::vector<AffineMap> m;
  for (const auto& [r, o] : maps) m.push_back({r, o});
  return IfsSpec::affine(std::move(m), {domain.first, domain.second});
}

}  // namespace

PYBIND11_MODULE(_ifsthermo, m) {
  m.doc() = "Pressure, dimensions and Gibbs staircases for interval iterated function systems";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());

  py::class_<IfsSpec>(m, "IfsSpec")
      .def_property_readonly("alphabet_size", &IfsSpec::alphabet_size)
      .def_property_readonly("is_affine", &IfsSpec::is_affine)
      .def_property_readonly("domain", [](const IfsSpec& s) { return std::make_pair(s.domain.lo, s.domain.hi); })
      .def_static("middle_thirds", &IfsSpec::middle_thirds)
      .def_static("two_map_affine", &IfsSpec::two_map_affine, py::arg("a0"), py::arg("a1"))
      .def_static("affine", &affine, py::arg("maps"), py::arg("domain") = std::make_pair(0.0, 1.0),
                  "maps: list of (ratio, offset)")
      .def_static("nonlinear", &nonlinear, py::arg("params"),
                  "maps x -> c x + d + e x (1 - x) on [0, 1]; params: list of (c, d, e)");

  py::class_<Violation>(m, "Violation")
      .def_readonly("condition", &Violation::condition)
      .def_readonly("detail", &Violation::detail)
      .def_readonly("witnesses", &Violation::witnesses);
  m.def("validate_ifs", [](const IfsSpec& s, int grid) {
    ValidationOptions o;
    o.grid_points = grid;
    return validate_ifs(s, o);
  }, py::arg("spec"), py::arg("grid_points") = 1024);
  m.def("cylinder", [](const IfsSpec& s, const Word& w) {
    const CylinderInfo c = cylinder(s, w);
    return std::make_pair(c.interval.lo, c.interval.hi);
  }, py::arg("spec"), py::arg("word"));
  m.def("encode", [](const IfsSpec& s, double x, int depth) {
    const Encoding e = encode(s, x, depth);
    return std::make_pair(e.word, e.in_gap);
  }, py::arg("spec"), py::arg("x"), py::arg("depth"));
  m.def("decode", [](const IfsSpec& s, const Word& prefix, const Word& period, double tol) {
    return decode(s, CodedPoint::periodic(prefix, period), tol);
  }, py::arg("spec"), py::arg("prefix"), py::arg("period"), py::arg("tolerance") = 1e-12);
  m.def("fixed_point", &fixed_point, py::arg("spec"), py::arg("symbol"));

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def_readonly("phi_coeff", &PotentialSpec::phi_coeff)
      .def_readonly("constant", &PotentialSpec::constant)
      .def_readonly("symbol_terms", &PotentialSpec::symbol_terms)
      .def("__repr__", &PotentialSpec::describe);
  m.def("geometric_potential", &geometric_potential);
  m.def("scaled_geometric", &scaled_geometric, py::arg("t"));
  m.def("darst_shift_with", &darst_shift_with, py::arg("pressure_of_phi"));
  m.def("bernoulli_potential", &bernoulli_potential, py::arg("probabilities"));
  m.def("linear_combination", &linear_combination, py::arg("coeff_phi"), py::arg("coeff_base"), py::arg("base"));
  m.def("birkhoff_sum", &birkhoff_sum, py::arg("spec"), py::arg("potential"), py::arg("word"), py::arg("x"));

  py::class_<PressureEstimate>(m, "PressureEstimate")
      .def_readonly("value", &PressureEstimate::value)
      .def_readonly("per_level", &PressureEstimate::per_level)
      .def_readonly("error_indicator", &PressureEstimate::error_indicator)
      .def_readonly("depth", &PressureEstimate::depth);
  py::class_<BetaPoint>(m, "BetaPoint")
      .def_readonly("t", &BetaPoint::t)
      .def_readonly("beta", &BetaPoint::beta)
      .def_readonly("alpha", &BetaPoint::alpha)
      .def_readonly("residual", &BetaPoint::residual);
  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("passed", &AdmissibilityReport::passed)
      .def_readonly("pressure", &AdmissibilityReport::pressure)
      .def_readonly("failures", &AdmissibilityReport::failures);

  m.def("pressure", py::overload_cast<const IfsSpec&, const PotentialSpec&, int>(&pressure), py::arg("spec"),
        py::arg("potential"), py::arg("depth") = 16);
  m.def("admissibility_check", &admissibility_check, py::arg("spec"), py::arg("psi"), py::arg("alpha"),
        py::arg("depth") = 16);
  m.def("solve_delta", &solve_delta, py::arg("spec"), py::arg("depth") = 16);
  m.def("darst_shift", [](const IfsSpec& s, int depth) {
    return darst_shift_with(pressure(s, geometric_potential(), depth).value);
  }, py::arg("spec"), py::arg("depth") = 16);
  m.def("beta", py::overload_cast<const IfsSpec&, const PotentialSpec&, double, double, int>(&beta), py::arg("spec"),
        py::arg("psi"), py::arg("alpha"), py::arg("t"), py::arg("depth") = 16);
  m.def("dim_nu_tangent", py::overload_cast<const IfsSpec&, const PotentialSpec&, double, int>(&dim_nu_tangent),
        py::arg("spec"), py::arg("psi"), py::arg("alpha"), py::arg("depth") = 16);

  py::class_<LambdaReport>(m, "LambdaReport")
      .def_readonly("alpha", &LambdaReport::alpha)
      .def_readonly("s", &LambdaReport::s)
      .def_readonly("s0", &LambdaReport::s0)
      .def_readonly("s1", &LambdaReport::s1)
      .def_readonly("min_ratio", &LambdaReport::min_ratio)
      .def_readonly("delta", &LambdaReport::delta)
      .def_readonly("dim_nu", &LambdaReport::dim_nu)
      .def_readonly("ordering_note", &LambdaReport::ordering_note);
  m.def("lambda_dimension",
        py::overload_cast<const IfsSpec&, const PotentialSpec&, double, int>(&lambda_dimension), py::arg("spec"),
        py::arg("psi"), py::arg("alpha"), py::arg("depth") = 16);
  m.def("darst_consistency", py::overload_cast<const IfsSpec&, int>(&darst_consistency), py::arg("spec"),
        py::arg("depth") = 16);

  m.def("cylinder_weight", [](const IfsSpec& s, const PotentialSpec& psi, const Word& w) {
    const CylinderWeight c = cylinder_weight(s, psi, w);
    return std::make_pair(c.value, c.comparability);
  }, py::arg("spec"), py::arg("psi"), py::arg("word"));
  m.def("distribution_value", [](const IfsSpec& s, const PotentialSpec& psi, double x, int level) {
    const Bounds b = distribution_value(s, psi, x, level);
    return std::make_pair(b.lower, b.upper);
  }, py::arg("spec"), py::arg("psi"), py::arg("x"), py::arg("level"));
  m.def("staircase_sample", [](const IfsSpec& s, const PotentialSpec& psi, int level) {
    std::vector<std::tuple<double, double, double>> rows;
    for (const auto& p : staircase_sample(s, psi, level).points) rows.emplace_back(p.x, p.f_lower, p.f_upper);
    return rows;
  }, py::arg("spec"), py::arg("psi"), py::arg("level"));

  py::class_<BlockEvent>(m, "BlockEvent")
      .def_readonly("symbol", &BlockEvent::symbol)
      .def_readonly("level", &BlockEvent::level)
      .def_readonly("length", &BlockEvent::length)
      .def_readonly("birkhoff_chi", &BlockEvent::birkhoff_chi)
      .def_readonly("score", &BlockEvent::score);
  m.def("detect_blocks", [](const Word& w, const IfsSpec& s, const PotentialSpec& psi, double alpha) {
    return detect_blocks(w, s, psi, alpha).blocks;
  }, py::arg("word"), py::arg("spec"), py::arg("psi"), py::arg("alpha"));
  m.def("oscillation_candidate", [](const IfsSpec& s, const PotentialSpec& psi, double alpha, const Word& prefix,
                                    const Word& period, int depth) {
    return oscillation_score_series(s, psi, alpha, CodedPoint::periodic(prefix, period), depth).oscillation_candidate;
  }, py::arg("spec"), py::arg("psi"), py::arg("alpha"), py::arg("prefix"), py::arg("period"), py::arg("depth"));
}
