// Python bindings: reports as JSON text plus a few jet-calculus helpers.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lagrep/jet.hpp"
#include "lagrep/report.hpp"
#include "lagrep/wdvv.hpp"

namespace py = pybind11;
using namespace lagrep;

namespace {

ReportOptions options(int jet_bound, std::uint32_t triple_order, unsigned rden_bound, const std::string& op,
                      const std::string& density, bool compare_expected) {
  ReportOptions o;
  o.jet_bound = jet_bound;
  o.triple_order = triple_order;
  o.rden_bound = rden_bound;
  o.op = op;
  o.density = density;
  o.compare_expected = compare_expected;
  return o;
}

template <Report (*F)(const Json&, const ReportOptions&)>
py::tuple run(const std::string& input, int jet_bound, std::uint32_t triple_order, unsigned rden_bound,
              const std::string& op, const std::string& density, bool compare_expected) {
  const Json j = Json::parse(input);
  Report r;
  {
    py::gil_scoped_release release;
    r = F(j, options(jet_bound, triple_order, rden_bound, op, density, compare_expected));
  }
  return py::make_tuple(r.pass, r.json.dump(2), r.summary);
}

template <Report (*F)(const Json&, const ReportOptions&)>
void def_report(py::module_& m, const char* name, const char* doc) {
  m.def(name, &run<F>, doc, py::arg("input"), py::arg("jet_bound") = kDefaultJetBound,
        py::arg("triple_order") = 2, py::arg("rden_bound") = 2, py::arg("operator") = "",
        py::arg("density") = "", py::arg("compare_expected") = false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact engine for Lagrangian representations of bi-Hamiltonian pairs";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<MathError> math_error(m, "MathError", PyExc_ArithmeticError);
  static py::exception<BoundError> bound_error(m, "BoundError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::input: py::set_error(input_error, e.what()); return;
        case ErrorKind::math: py::set_error(math_error, e.what()); return;
        case ErrorKind::resource_bound: py::set_error(bound_error, e.what()); return;
      }
    } catch (const Json::exception& e) {
      py::set_error(input_error, e.what());
    }
  });

  m.attr("SCHEMA") = kReportSchema;
  m.def("fixture", [](const std::string& name) { return fixture_json(name).dump(2); },
        "JSON text of a built-in fixture", py::arg("name"));

  def_report<transform_report>(m, "transform", "Change coordinates of an operator");
  def_report<derive_report>(m, "derive", "Full derivation and certification");
  def_report<check_report>(m, "check", "Skew-adjointness and Hamiltonianity evidence");
  def_report<curvature_report>(m, "curvature", "Curvature of the symplectic metric");
  def_report<recursion_report>(m, "recursion", "Recursion step(s)");
  def_report<conservation_report>(m, "conservation", "Conservation of the L_n");

  m.def(
      "euler",
      [](const std::string& density, const Names& names, int jet_bound) {
        const Covector e = euler(parse_diffpoly(density, names, jet_bound));
        std::vector<std::string> out;
        for (const auto& c : e.components()) out.push_back(to_string(c, names));
        return out;
      },
      "Variational derivative of a density", py::arg("density"), py::arg("coordinates"),
      py::arg("jet_bound") = kDefaultJetBound);
  m.def(
      "total_x",
      [](const std::string& density, const Names& names, int jet_bound) {
        return to_string(total_x(parse_diffpoly(density, names, jet_bound)), names);
      },
      "Total x-derivative", py::arg("density"), py::arg("coordinates"), py::arg("jet_bound") = kDefaultJetBound);
  m.def(
      "is_total_divergence",
      [](const std::string& density, const Names& names, int jet_bound) {
        return is_total_divergence(parse_diffpoly(density, names, jet_bound));
      },
      py::arg("density"), py::arg("coordinates"), py::arg("jet_bound") = kDefaultJetBound);
}
