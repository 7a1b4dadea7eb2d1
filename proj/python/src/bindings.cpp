#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/master.hpp"
#include "expq/metrics.hpp"
#include "expq/normalize.hpp"
#include "expq/numtheory.hpp"
#include "expq/oracle.hpp"
#include "expq/parser.hpp"
#include "expq/prenex.hpp"
#include "expq/semenov.hpp"

namespace py = pybind11;
using namespace expq;

namespace {

// mpz <-> Python int through decimal strings
py::int_ toPy(const Integer& n) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(n.get_str().c_str(), nullptr, 10));
}
Integer fromPy(const py::int_& n) { return Integer(py::str(py::handle(n)).cast<std::string>()); }

Dialect dialectOf(const std::string& d) {
  if (d == "presexp") return Dialect::PresExp;
  if (d == "prespower") return Dialect::PresPower;
  throw py::value_error("dialect must be 'presexp' or 'prespower'");
}

SolveConfig configOf(const std::string& strategy, const std::string& fragment, double maxSeconds,
                     std::uint64_t maxDisjuncts, bool check) {
  SolveConfig cfg;
  if (strategy == "backtracking") cfg.strategy = Strategy::Backtracking;
  else if (strategy != "exhaustive") throw py::value_error("strategy must be 'exhaustive' or 'backtracking'");
  if (fragment == "sem") cfg.fragment = Fragment::Sem;
  else if (fragment != "qf") throw py::value_error("fragment must be 'qf' or 'sem'");
  cfg.limits.maxSeconds = maxSeconds;
  cfg.limits.maxDisjuncts = maxDisjuncts;
  cfg.checkInvariants = check;
  return cfg;
}

std::vector<Variable> varsOf(const std::vector<std::string>& names) {
  std::vector<Variable> out;
  for (const auto& n : names) out.push_back(Variable::intern(n));
  return out;
}

}  // namespace

PYBIND11_MODULE(_expq, m) {
  m.doc() = "Decision procedures for Presburger arithmetic with the function x -> 2^|x|";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceExceeded>(m, "ResourceExceeded", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

  py::class_<Formula>(m, "Formula")
      .def("__str__", [](const Formula& f) { return render(f); })
      .def("__repr__", [](const Formula& f) { return "Formula(" + render(f) + ")"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def("__hash__", [](const Formula& f) { return f.hash(); })
      .def_property_readonly("free_variables", [](const Formula& f) {
        std::vector<std::string> out;
        for (Variable v : freeVariables(f)) out.push_back(v.name());
        return out;
      });

  m.def("parse", [](const std::string& text, const std::string& dialect) { return parse(text, dialectOf(dialect)); },
        py::arg("text"), py::arg("dialect") = "presexp");
  m.def("normalize", &normalize, py::arg("formula"));
  m.def("render", [](const Formula& f) { return render(f); }, py::arg("formula"));
  m.def("metrics_json", [](const Formula& f) { return metrics(f).toJson().dump(); }, py::arg("formula"));

  m.def(
      "decide",
      [](const Formula& f, const std::string& dialect, const std::string& strategy, double maxSeconds,
         std::uint64_t maxDisjuncts, bool check) {
        py::gil_scoped_release release;
        if (dialectOf(dialect) == Dialect::PresPower) {
          SolveConfig cfg = configOf(strategy, "sem", maxSeconds, maxDisjuncts, check);
          return decidePresPower(f, cfg).value;
        }
        return decidePresExp(f, configOf(strategy, "qf", maxSeconds, maxDisjuncts, check)).value;
      },
      py::arg("sentence"), py::arg("dialect") = "presexp", py::arg("strategy") = "exhaustive",
      py::arg("max_seconds") = 300.0, py::arg("max_disjuncts") = 1'000'000, py::arg("check") = false);

  m.def(
      "qe",
      [](const Formula& f, const std::string& fragment, double maxSeconds) {
        PrenexFormula p = toPrenex(normalize(f));
        py::gil_scoped_release release;
        return masterProcedure(p, configOf("exhaustive", fragment, maxSeconds, 1'000'000, false));
      },
      py::arg("formula"), py::arg("fragment") = "qf", py::arg("max_seconds") = 300.0);

  m.def(
      "linearise",
      [](const Formula& f, const std::vector<std::string>& vars) {
        return linearise(varsOf(vars), normalize(f), Fragment::QF);
      },
      py::arg("formula"), py::arg("variables"));

  m.def(
      "evaluate",
      [](const Formula& f, const std::map<std::string, py::int_>& values) {
        Assignment nu;
        for (const auto& [k, v] : values) nu[Variable::intern(k)] = fromPy(v);
        return evalQF(f, nu);
      },
      py::arg("formula"), py::arg("assignment") = std::map<std::string, py::int_>{});

  m.def(
      "sample_equivalent",
      [](const Formula& a, const Formula& b, std::uint64_t seed) {
        SamplerSpec spec;
        spec.seed = seed;
        return sampleEquivalence(a, b, spec).agree();
      },
      py::arg("a"), py::arg("b"), py::arg("seed") = 1);

  m.def("lambda_", [](const py::int_& n) { return toPy(lambda(fromPy(n))); }, py::arg("n"));

  m.def(
      "solve_pow_congruence",
      [](const py::int_& q, const py::int_& r) -> py::object {
        CongruenceSolution s = solvePowCongruence(fromPy(q), fromPy(r));
        if (std::holds_alternative<CongruenceUnsat>(s)) return py::none();
        if (auto* one = std::get_if<CongruenceSingle>(&s)) return py::make_tuple(toPy(one->s), py::none());
        auto& p = std::get<CongruenceProgression>(s);
        return py::make_tuple(toPy(p.s), toPy(p.t));
      },
      py::arg("q"), py::arg("r"),
      "None when unsatisfiable, (s, None) for the single solution s, (s, t) for {s + i t : i >= 0}.");
}
