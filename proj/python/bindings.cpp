#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "teglab/base_repr.hpp"
#include "teglab/csi.hpp"
#include "teglab/errors.hpp"
#include "teglab/potential.hpp"
#include "teglab/propagators.hpp"
#include "teglab/reference.hpp"
#include "teglab/solver.hpp"
#include "teglab/teg.hpp"
#include "teglab/validation.hpp"

namespace py = pybind11;
using namespace teglab;

namespace {

teg::Equation equation(const std::string& name) {
  if (name == "diffusion") return teg::Equation::diffusion;
  if (name == "schrodinger") return teg::Equation::schrodinger;
  throw InvalidArgument("equation must be 'diffusion' or 'schrodinger'");
}

solver::Method method(const std::string& name) {
  if (name == "lattice_dp") return solver::Method::lattice_dp;
  if (name == "compact_enumerate") return solver::Method::compact_enumerate;
  if (name == "binomial_closed_form") return solver::Method::binomial_closed_form;
  throw InvalidArgument("unknown method '" + name + "'");
}

solver::Reference reference(const std::string& name) {
  if (name == "closed_form") return solver::Reference::closed_form;
  if (name == "gaussian_integral") return solver::Reference::gaussian_integral;
  if (name == "matrix_exponential") return solver::Reference::matrix_exponential;
  throw InvalidArgument("unknown reference '" + name + "'");
}

solver::SolveConfig config(const std::string& eq, const std::string& potential, const std::string& initial,
                           const std::string& initial_im, double T, int N, int K,
                           const std::vector<std::vector<double>>& points, const std::string& how) {
  solver::SolveConfig c;
  c.kind = {equation(eq), K};
  c.T = T;
  c.N = N;
  c.potential = dsl::Field::parse(potential, K);
  c.initial = dsl::ComplexField::parse(initial, initial_im, K);
  c.points = points;
  c.method = method(how);
  return c;
}

teg::TegSpec spec_for(int order, int N, double T) {
  if (order == 2) return teg::TegSpec::diffusion(N, T);
  if (order == 3 || order == 5 || order == 7) return teg::TegSpec::schrodinger(N, T, (order - 1) / 2);
  throw InvalidArgument("order must be 2, 3, 5 or 7");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Translation-evolution-grid solvers for diffusion and Schrodinger equations";

  auto base_error = py::register_exception<Error>(m, "TeglabError");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SyntaxError>(m, "ExpressionSyntaxError", base_error.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", base_error.ptr());
  py::register_exception<GuardError>(m, "GuardError", base_error.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);

  m.def(
      "digits", [](std::int64_t M, std::int64_t b) { return base::digits_euclid(M, b).digits; }, py::arg("M"),
      py::arg("base"), "Base-b digits of M, least significant first");
  m.def(
      "digit_csi", [](std::int64_t M, std::int64_t b, int m, int N) { return base::digit_csi(M, b, m, N); },
      py::arg("M"), py::arg("base"), py::arg("m"), py::arg("N"), "Digit a_m by CSI coefficient extraction");

  m.def(
      "path",
      [](std::int64_t M, int order, int N) {
        const teg::TegSpec spec = spec_for(order, N, 1.0);
        const teg::Path p = teg::path_from_index(M, spec);
        py::dict d;
        d["moves"] = p.moves;
        d["prefix_shifts"] = p.prefix_shifts;
        d["terminal"] = p.terminal;
        d["prefactor"] = teg::prefactor_C(M, spec);
        return d;
      },
      py::arg("M"), py::arg("order") = 2, py::arg("N"));

  m.def(
      "coeff",
      [](const std::vector<std::pair<std::vector<std::int64_t>, std::complex<double>>>& terms,
         const std::vector<std::int64_t>& e) {
        std::vector<csi::Term> t;
        for (const auto& [ex, v] : terms) t.push_back({ex, v});
        return csi::coeff(csi::LaurentPoly::from_terms(e.size(), std::move(t)), e);
      },
      py::arg("terms"), py::arg("exponent"), "Coefficient of a monomial in a sparse Laurent polynomial");

  m.def(
      "evaluate",
      [](const std::string& source, const std::vector<double>& x, double t) {
        return dsl::Field::parse(source, static_cast<int>(x.size()))(x, t);
      },
      py::arg("expression"), py::arg("x"), py::arg("t") = 0.0, "Evaluates an expression at (x, t)");

  m.def(
      "solve",
      [](const std::string& eq, const std::string& potential, const std::string& initial,
         const std::string& initial_im, double T, int N, int K, const std::vector<std::vector<double>>& points,
         const std::string& how) {
        const auto c = config(eq, potential, initial, initial_im, T, N, K, points, how);
        py::gil_scoped_release release;
        return solver::solve(c);
      },
      py::arg("eq") = "diffusion", py::arg("potential") = "0", py::arg("initial") = "exp(-x^2)",
      py::arg("initial_im") = "", py::arg("T") = 1.0, py::arg("N") = 8, py::arg("K") = 1,
      py::arg("points") = std::vector<std::vector<double>>{}, py::arg("method") = "lattice_dp",
      "Discrete solution at the evaluation points (default: 11 points on [-2, 2])");

  m.def(
      "converge",
      [](const std::string& eq, const std::string& potential, const std::string& initial,
         const std::string& initial_im, double T, const std::vector<int>& Ns, const std::string& ref,
         const std::string& exact, const std::string& exact_im) {
        auto c = config(eq, potential, initial, initial_im, T, Ns.empty() ? 1 : Ns.front(), 1, {}, "lattice_dp");
        solver::ConvergenceOptions o;
        o.reference = reference(ref);
        if (!exact.empty()) o.exact = dsl::ComplexField::parse(exact, exact_im, 1);
        std::vector<solver::ConvergenceRow> rows;
        {
          py::gil_scoped_release release;
          rows = solver::convergence_study(c, Ns, o);
        }
        std::vector<std::pair<int, double>> out;
        for (const auto& r : rows) out.emplace_back(r.N, r.error);
        return out;
      },
      py::arg("eq") = "diffusion", py::arg("potential") = "0", py::arg("initial") = "exp(-x^2)",
      py::arg("initial_im") = "", py::arg("T") = 1.0, py::arg("Nlist"), py::arg("reference") = "matrix_exponential",
      py::arg("exact") = "", py::arg("exact_im") = "", "(N, error) rows against the chosen reference");

  m.def("stirling_ratio", &ref::stirling_ratio, py::arg("N"));
  m.def("demoivre_weight", &solver::demoivre_weight, py::arg("N"), py::arg("k"));

  m.def("validate", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& r : validation::run_all()) out.emplace_back(r.name, r.passed, r.detail);
    return out;
  });
}
