#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "interdesign/family.hpp"
#include "interdesign/io.hpp"
#include "interdesign/oracle.hpp"
#include "interdesign/round.hpp"

namespace py = pybind11;
using namespace interdesign;

namespace {

ObjectiveKind make_kind(const std::string& name, int l_prime, int l) {
  return parse_objective(name, l_prime, l);
}

}  // namespace

PYBIND11_MODULE(_interdesign, m) {
  m.doc() = "interlacing-polynomial rounding for experimental design";

  py::register_exception<Error>(m, "InterdesignError");

  py::class_<RealRootedPoly>(m, "RealRootedPoly")
      .def(py::init<std::vector<double>>())
      .def_readonly("coeffs", &RealRootedPoly::coeffs)
      .def("degree", &RealRootedPoly::degree)
      .def("__call__", [](const RealRootedPoly& p, double x) { return eval(p, x); });

  py::class_<FractionalSolution>(m, "FractionalSolution")
      .def_readonly("x", &FractionalSolution::x)
      .def_readonly("objective_value", &FractionalSolution::objective_value)
      .def_readonly("certified", &FractionalSolution::certified)
      .def_readonly("certificate", &FractionalSolution::certificate)
      .def_readonly("iterations", &FractionalSolution::iterations)
      .def_property_readonly(
          "X", [](const FractionalSolution& f) { return f.X.data(); });

  py::class_<RoundingResult>(m, "RoundingResult")
      .def_readonly("selection", &RoundingResult::selection)
      .def_readonly("integral_objective", &RoundingResult::integral_objective)
      .def_readonly("fractional_objective", &RoundingResult::fractional_objective)
      .def_readonly("certified_ratio", &RoundingResult::certified_ratio)
      .def_readonly("theorem_bound", &RoundingResult::theorem_bound);

  m.def(
      "solve",
      [](const Eigen::MatrixXd& vectors, int k, const std::string& objective,
         int l_prime, int l, double tol) {
        Instance inst{static_cast<int>(vectors.cols()), k, vectors};
        return solve_relaxation(inst, make_kind(objective, l_prime, l), tol);
      },
      py::arg("vectors"), py::arg("k"), py::arg("objective") = "D",
      py::arg("lprime") = 0, py::arg("l") = 0, py::arg("tol") = 1e-6,
      "Solve the convex relaxation; rows of `vectors` are the candidates.");

  m.def(
      "round",
      [](const Eigen::MatrixXd& vectors, int k, const std::string& objective,
         int l_prime, int l, std::optional<std::vector<double>> x, double tol) {
        Instance inst{static_cast<int>(vectors.cols()), k, vectors};
        const ObjectiveKind kind = make_kind(objective, l_prime, l);
        FractionalSolution frac =
            x ? validate_fractional(inst, *x, kind)
              : solve_relaxation(inst, kind, tol);
        RoundingResult result = round_design(inst, frac, kind);
        return py::make_tuple(result, frac, certify(result, frac, kind));
      },
      py::arg("vectors"), py::arg("k"), py::arg("objective") = "D",
      py::arg("lprime") = 0, py::arg("l") = 0, py::arg("x") = py::none(),
      py::arg("tol") = 1e-6,
      "Solve (or take x) and round; returns (result, fractional, certified).");

  m.def(
      "theorem_bound",
      [](const std::string& objective, int d, int k, int l_prime, int l) {
        return theorem_bound(make_kind(objective, l_prime, l), d, k);
      },
      py::arg("objective"), py::arg("d"), py::arg("k"), py::arg("lprime") = 0,
      py::arg("l") = 0);

  m.def(
      "min_root",
      [](const std::vector<double>& coeffs, double eps) {
        return min_root(RealRootedPoly(coeffs), eps);
      },
      py::arg("coeffs"), py::arg("eps") = 1e-9,
      "Smallest root of a real-rooted polynomial (coefficients ascending).");

  m.def(
      "normalized_root_poly",
      [](int k, int d) { return normalized_root_poly(k, d).coeffs; },
      py::arg("k"), py::arg("d"));

  m.def(
      "root_poly_closed_form",
      [](const std::vector<double>& eigs, int k, int d) {
        return root_poly_closed_form(eigs, k, d).coeffs;
      },
      py::arg("eigs"), py::arg("k"), py::arg("d"));

  m.def(
      "expected_charpoly",
      [](const Eigen::MatrixXd& vectors, const std::vector<double>& x, int k,
         const std::vector<int>& prefix) {
        FamilyContext ctx(vectors, x, k);
        PartialSelection node =
            PartialSelection::root(static_cast<int>(vectors.cols()));
        for (int s : prefix) node = node.extended(ctx, s);
        return conditional_expected_charpoly(ctx, node).coeffs;
      },
      py::arg("vectors"), py::arg("x"), py::arg("k"),
      py::arg("prefix") = std::vector<int>{},
      "Conditional expected characteristic polynomial of a family node.");
}
