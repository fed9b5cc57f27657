#include "ifp/counting.hpp"
#include "ifp/error.hpp"
#include "ifp/experiment.hpp"
#include "ifp/kneser.hpp"
#include "ifp/matchproc.hpp"
#include "ifp/r0dist.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ifp;

namespace {

std::string rat_str(const Rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

Rational parse_rational(const std::string& s) {
  std::istringstream in(s);
  Rational r;
  in >> r;
  if (in.fail()) throw Error(ErrorCode::InvalidArgument, "not a rational: " + s);
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the ifplab intersecting-family process library";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<Error>(m, "IfpError", PyExc_RuntimeError);

  m.def("hazard_ratio", &hazard_ratio, py::arg("r"), py::arg("c"));
  m.def("hazard_ratio_exact", [](int r, const std::string& c3) { return rat_str(hazard_ratio_exact(r, parse_rational(c3))); },
        py::arg("r"), py::arg("c_cubed"));
  m.def("egf_coeffs", &egf_coeffs, py::arg("c"), py::arg("r_max"));
  m.def(
      "r0_pmf",
      [](double c, int r_max) {
        const auto t = r0_pmf(c, r_max);
        py::dict out;
        for (std::size_t i = 0; i < t.pmf.size(); ++i) out[py::int_(i + 1)] = t.pmf[i];
        return py::make_tuple(out, t.tail);
      },
      py::arg("c"), py::arg("r_max") = 30, "Returns ({r0: probability}, tail mass).");
  m.def(
      "r0_pmf_exact",
      [](const std::string& c3, int r_max) {
        const auto t = r0_pmf_exact(parse_rational(c3), r_max);
        py::dict out;
        for (std::size_t i = 0; i < t.pmf_exact.size(); ++i) out[py::int_(i + 1)] = rat_str(t.pmf_exact[i]);
        return out;
      },
      py::arg("c_cubed"), py::arg("r_max") = 10);
  m.def("indep_deg2_count", [](int r, int m_) { return indep_deg2_count(r, m_).str(); }, py::arg("r"), py::arg("m"));

  m.def(
      "matching_stop_distribution",
      [](const std::string& w, int t_max) {
        const auto d = exact_stop_distribution(parse_rational(w), t_max);
        py::dict stop, cond;
        for (const auto& [t, p] : d.stop) stop[py::int_(t)] = rat_str(p);
        for (const auto& [t, law] : d.conditional) {
          py::dict row;
          for (const auto& [type, p] : law) row[py::str(std::string(to_string(type)))] = rat_str(p);
          cond[py::int_(t)] = row;
        }
        return py::dict(py::arg("stop") = stop, py::arg("overflow") = rat_str(d.overflow), py::arg("conditional") = cond);
      },
      py::arg("w") = "1", py::arg("t_max") = 6);

  m.def(
      "kneser_params",
      [](int n, int k) {
        const auto p = kneser_params(n, k);
        return py::dict(py::arg("N") = py::int_(py::str(p.N.str())), py::arg("d") = py::int_(py::str(p.d.str())), py::arg("c") = p.c, py::arg("gamma") = p.gamma,
                        py::arg("eps1") = p.eps1, py::arg("eps2") = p.eps2, py::arg("epsilon") = p.epsilon,
                        py::arg("codegree_threshold") = p.codegree_threshold());
      },
      py::arg("n"), py::arg("k"));

  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::map<std::string, std::string>& options) {
        KeyValues flags{{"experiment", experiment, "python"}};
        for (const auto& [k, v] : options) flags.push_back({k, v, "python"});
        auto cfg = parse_config({}, flags);
        py::gil_scoped_release release;
        return run_experiment(cfg).summary_json;
      },
      py::arg("experiment"), py::arg("options") = std::map<std::string, std::string>{},
      "Runs an experiment and returns its summary JSON text. Options are key=value strings as in config files.");
}
