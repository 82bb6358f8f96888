// Python bindings. Rationals cross the boundary as "p/q" strings, reports as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "posicert/analysis.hpp"
#include "posicert/cli.hpp"
#include "posicert/constructive.hpp"
#include "posicert/io.hpp"
#include "posicert/search.hpp"

namespace py = pybind11;
using namespace posicert;

namespace {

std::vector<Rational> parse_point(const std::vector<std::string>& coords) {
  std::vector<Rational> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(parse_rational(c));
  return out;
}

Cone parse_cone(const std::string& name) {
  if (name == "R") return Cone::R;
  if (name == "Q") return Cone::Q;
  if (name == "T") return Cone::T;
  throw std::invalid_argument("cone must be R, Q or T");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact positivity certificates over semialgebraic sets";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init([](const std::string& expr, std::size_t nvars) { return parse_polynomial(expr, nvars); }),
           py::arg("expr"), py::arg("nvars"))
      .def_static("from_json", [](const std::string& text) { return polynomial_from_json(Json::parse(text)); })
      .def("to_json", [](const Polynomial& p) { return to_json(p).dump(); })
      .def_property_readonly("nvars", &Polynomial::nvars)
      .def_property_readonly("degree", &Polynomial::degree)
      .def("eval", [](const Polynomial& p, const std::vector<std::string>& point) {
        return to_string(eval(p, parse_point(point)));
      })
      .def("scaled", [](const Polynomial& p, const std::string& c) { return p * parse_rational(c); })
      .def("norm_l1", [](const Polynomial& p) { return to_string(norm_l1_coef(p)); })
      .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
      .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
      .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
      .def("__neg__", [](const Polynomial& a) { return -a; })
      .def("__pow__", [](const Polynomial& a, unsigned e) { return a.pow(e); })
      .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
      .def("__str__", &Polynomial::to_string)
      .def("__repr__", [](const Polynomial& p) { return "Polynomial('" + p.to_string() + "')"; });

  py::class_<GeneratorSystem>(m, "GeneratorSystem")
      .def(py::init<std::size_t, std::vector<Polynomial>, std::vector<std::string>>(), py::arg("nvars"),
           py::arg("gens"), py::arg("labels") = std::vector<std::string>{})
      .def_static("box", &GeneratorSystem::box, py::arg("n"))
      .def_static("from_json", [](const std::string& text) { return system_from_json(Json::parse(text)); })
      .def("to_json", [](const GeneratorSystem& s) { return to_json(s).dump(); })
      .def_property_readonly("nvars", &GeneratorSystem::nvars)
      .def_property_readonly("gens", &GeneratorSystem::gens)
      .def_property_readonly("labels", &GeneratorSystem::labels)
      .def("__len__", &GeneratorSystem::size);

  m.def(
      "verify",
      [](const std::string& cert_json, const Polynomial& target, const std::string& base_dir) {
        return to_json(verify(certificate_from_json(Json::parse(cert_json), base_dir), target)).dump();
      },
      py::arg("cert_json"), py::arg("target"), py::arg("base_dir") = "");

  m.def(
      "certify",
      [](const std::string& method, const Polynomial& f, const GeneratorSystem& sys, unsigned r_min, unsigned r_max,
         std::optional<std::string> lifting) {
        SearchConfig cfg;
        cfg.r_min = r_min;
        cfg.r_max = r_max;
        cfg.validate();
        py::gil_scoped_release release;
        const Method meth = parse_method(method);
        if (meth == Method::Lift) {
          std::optional<Polynomial> F;
          if (lifting) F = parse_polynomial(*lifting, f.nvars() + sys.size(), f.nvars());
          const auto res = certify_via_lift(f, sys, cfg, F);
          Json j = to_json(res.outcome);
          j["trace"] = to_json(res.trace);
          return j.dump();
        }
        return to_json(certify(meth, f, sys, cfg)).dump();
      },
      py::arg("method"), py::arg("f"), py::arg("sys"), py::arg("r_min") = 0, py::arg("r_max") = 8,
      py::arg("lifting") = std::nullopt);

  m.def(
      "norm1_minus_f",
      [](const Polynomial& f, const std::string& cone) { return to_json(norm1_minus_f(f, parse_cone(cone))).dump(); },
      py::arg("f"), py::arg("cone"));

  m.def(
      "lp_lower_bound",
      [](const Polynomial& p, const GeneratorSystem& sys, const std::string& method, unsigned r,
         const std::string& tol) {
        py::gil_scoped_release release;
        return to_string(lp_lower_bound(p, sys, parse_method(method), r, parse_rational(tol)));
      },
      py::arg("p"), py::arg("sys"), py::arg("method"), py::arg("r"), py::arg("tol") = "1/1048576");

  m.def(
      "degree_bounds",
      [](const std::string& inputs_json) {
        return to_json(degree_bounds(bound_inputs_from_json(Json::parse(inputs_json)))).dump();
      },
      py::arg("inputs_json"));

  m.def(
      "violations",
      [](const GeneratorSystem& sys, const std::vector<std::string>& point) {
        const auto x = parse_point(point);
        return std::make_pair(to_string(violation_G(sys, x)), to_string(violation_H(sys, x)));
      },
      py::arg("sys"), py::arg("point"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
