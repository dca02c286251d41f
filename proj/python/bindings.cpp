#include "blowup/asymptotics.hpp"
#include "blowup/errors.hpp"
#include "blowup/profile.hpp"
#include "blowup/quad.hpp"
#include "blowup/reduction.hpp"
#include "blowup/verify.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace blowup;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Blow-up profiles and the scalar reduction of (||u||_q^q + b)^r u'' = lambda u^p";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
    (void)domain;

    py::class_<quad::QuadResult>(m, "QuadResult")
        .def_readonly("value", &quad::QuadResult::value)
        .def_readonly("error_estimate", &quad::QuadResult::error_estimate)
        .def_readonly("evaluations", &quad::QuadResult::evaluations);

    m.def("beta", &quad::beta, py::arg("x"), py::arg("y"));
    m.def("lp_constant", &quad::lp_constant, py::arg("p"));
    m.def("tail_moment", &quad::tail_moment, py::arg("p"), py::arg("q"));
    m.def("tail_moment_closed", &quad::tail_moment_closed, py::arg("p"), py::arg("q"));

    py::class_<Profile, std::shared_ptr<Profile>>(m, "Profile")
        .def(py::init([](double p, std::optional<double> u_max, std::size_t n_points) {
                 return std::make_shared<Profile>(build_profile(p, u_max, n_points));
             }),
             py::arg("p"), py::arg("u_max") = std::nullopt, py::arg("n_points") = kDefaultProfilePoints)
        .def_property_readonly("p", &Profile::p)
        .def_property_readonly("mu", &Profile::mu)
        .def_property_readonly("u_max", &Profile::u_max)
        .def_property_readonly("boundary_constant", &Profile::boundary_constant)
        .def_property_readonly("boundary_gap", &Profile::boundary_gap)
        .def_property_readonly("table",
                               [](const Profile& self) {
                                   std::vector<std::pair<double, double>> rows;
                                   for (const TableRow& row : self.table()) {
                                       rows.emplace_back(row.u, row.x);
                                   }
                                   return rows;
                               })
        .def("time_map", &Profile::time_map, py::arg("u"))
        .def("norm", &Profile::norm, py::arg("q"))
        .def("__call__", [](const Profile& self, double x) { return eval_U(self, x); }, py::arg("x"))
        .def("near_boundary", [](const Profile& self, double gap) { return eval_U_near_boundary(self, gap); },
             py::arg("gap"))
        .def("lq_norm_numeric", [](const Profile& self, double q) { return lq_norm_numeric(self, q); },
             py::arg("q"));

    m.def("mu", &mu, py::arg("p"));
    m.def("lq_norm_closed", &lq_norm_closed, py::arg("p"), py::arg("q"));

    py::enum_<Regime>(m, "Regime")
        .value("SUPER", Regime::Super)
        .value("CRITICAL", Regime::Critical)
        .value("SUB", Regime::Sub)
        .value("GENERIC", Regime::Generic);

    py::enum_<SolutionKind>(m, "SolutionKind")
        .value("Empty", SolutionKind::Empty)
        .value("Unique", SolutionKind::Unique)
        .value("Pair", SolutionKind::Pair)
        .value("Tangent", SolutionKind::Tangent);

    py::class_<ProblemParams>(m, "ProblemParams")
        .def(py::init([](double p, double q, double r, double b, double lambda_) {
                 ProblemParams params{p, q, r, b, lambda_};
                 params.validate();
                 return params;
             }),
             py::arg("p"), py::arg("q"), py::arg("r"), py::arg("b"), py::arg("lambda_"))
        .def_readonly("p", &ProblemParams::p)
        .def_readonly("q", &ProblemParams::q)
        .def_readonly("r", &ProblemParams::r)
        .def_readonly("b", &ProblemParams::b)
        .def_readonly("lambda_", &ProblemParams::lambda)
        .def_property_readonly("exponent", &ProblemParams::exponent)
        .def_property_readonly("regime", [](const ProblemParams& self) { return classify(self); });

    py::class_<FoldPoint>(m, "FoldPoint")
        .def_readonly("t0", &FoldPoint::t0)
        .def_readonly("lambda0", &FoldPoint::lambda0);

    py::class_<SolutionSet>(m, "SolutionSet")
        .def_readonly("kind", &SolutionSet::kind)
        .def_readonly("roots", &SolutionSet::roots)
        .def_readonly("fold", &SolutionSet::fold)
        .def_readonly("degenerate_continuum", &SolutionSet::degenerate_continuum)
        .def_readonly("rhs", &SolutionSet::rhs)
        .def_readonly("regime", &SolutionSet::regime);

    m.def("rhs_constant", &rhs_constant, py::arg("params"), py::arg("norm_q"));
    m.def("g_eval", &g_eval, py::arg("t"), py::arg("params"));
    m.def("g_prime", &g_prime, py::arg("t"), py::arg("params"));
    m.def("critical_point", &critical_point, py::arg("params"), py::arg("norm_q"));
    m.def("solve_scalar", &solve_scalar, py::arg("params"), py::arg("norm_q"), py::arg("tol") = kDefaultRootTol);
    m.def(
        "solve_general",
        [](const CoefficientFn& M, double p, double lambda_, double norm_q) {
            const GeneralRoots roots = solve_general(M, p, lambda_, norm_q);
            return py::make_tuple(roots.roots, roots.degenerate_continuum);
        },
        py::arg("M"), py::arg("p"), py::arg("lambda_"), py::arg("norm_q"),
        "Returns (roots, degenerate_continuum).");

    py::class_<BlowupSolution>(m, "BlowupSolution")
        .def(py::init([](double t, std::shared_ptr<Profile> profile, double q) {
                 return build_solution(t, std::move(profile), q);
             }),
             py::arg("t"), py::arg("profile"), py::arg("q"))
        .def_readonly("t", &BlowupSolution::t)
        .def_readonly("scale", &BlowupSolution::scale)
        .def("__call__", &BlowupSolution::operator(), py::arg("x"))
        .def("lq_norm_numeric", [](const BlowupSolution& self) { return lq_norm_numeric(self); });

    py::enum_<Branch>(m, "Branch").value("Lower", Branch::Lower).value("Upper", Branch::Upper);

    py::class_<AsymptoticExpansion>(m, "AsymptoticExpansion")
        .def_readonly("branch", &AsymptoticExpansion::branch)
        .def_readonly("leading", &AsymptoticExpansion::leading)
        .def_readonly("correction", &AsymptoticExpansion::correction)
        .def_readonly("m_pq", &AsymptoticExpansion::m_pq)
        .def_readonly("numeric", &AsymptoticExpansion::numeric)
        .def_readonly("remainder_ratio", &AsymptoticExpansion::remainder_ratio)
        .def("attach", &AsymptoticExpansion::attach, py::arg("numeric_root"));

    m.def("closed_form_b0", &closed_form_b0, py::arg("params"), py::arg("norm_q"));
    m.def("asymptotic_upper", &asymptotic_upper, py::arg("params"), py::arg("norm_q"));
    m.def("asymptotic_lower", &asymptotic_lower, py::arg("params"), py::arg("norm_q"));
    m.def("exact_quadratic", &exact_quadratic, py::arg("p"), py::arg("b"), py::arg("lambda_"), py::arg("norm_1"));

    m.def("run_verification", [] {
        py::list out;
        for (const Check& c : run_verification()) {
            out.append(py::make_tuple(c.name, c.pass, c.value, c.threshold));
        }
        return out;
    });
}
