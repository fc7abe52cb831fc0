#include "eigengrad/bounds.hpp"
#include "eigengrad/domains.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/eigensolver.hpp"
#include "eigengrad/mc.hpp"
#include "eigengrad/special.hpp"
#include "eigengrad/verify.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace eigengrad;

PYBIND11_MODULE(_core, m) {
    m.doc() = "two-sided gradient bounds for Dirichlet/Neumann eigenfunctions: "
              "closed-form bounds, model-domain eigensolvers, Monte-Carlo checks";

    py::register_exception<numeric_error>(m, "NumericError");

    py::class_<GeometryParams>(m, "GeometryParams")
        .def(py::init([](int d, double n, double K, double K_V, double theta,
                         double delta, double alpha) {
                 GeometryParams g{d, n, K, K_V, theta, delta, alpha};
                 g.validate();
                 return g;
             }),
             py::arg("d") = 1, py::arg("n") = -1.0, py::arg("K") = 0.0,
             py::arg("K_V") = 0.0, py::arg("theta") = 0.0,
             py::arg("delta") = 0.0, py::arg("alpha") = 0.0)
        .def_readwrite("d", &GeometryParams::d)
        .def_readwrite("n", &GeometryParams::n)
        .def_readwrite("K", &GeometryParams::K)
        .def_readwrite("K_V", &GeometryParams::K_V)
        .def_readwrite("theta", &GeometryParams::theta)
        .def_readwrite("delta", &GeometryParams::delta)
        .def_readwrite("alpha", &GeometryParams::alpha);

    py::enum_<UpperVariant>(m, "UpperVariant")
        .value("A", UpperVariant::A)
        .value("APrime", UpperVariant::APrime)
        .value("AStar", UpperVariant::AStar)
        .value("AHat", UpperVariant::AHat)
        .value("SimplifiedPos", UpperVariant::SimplifiedPos)
        .value("SimplifiedNeg", UpperVariant::SimplifiedNeg);

    py::class_<BoundSet>(m, "BoundSet")
        .def_readonly("lower", &BoundSet::lower)
        .def_readonly("upper", &BoundSet::upper)
        .def_property_readonly("variant",
                               [](const BoundSet& b) { return to_string(b.variant); })
        .def_property_readonly("branch",
                               [](const BoundSet& b) { return to_string(b.branch); })
        .def_readonly("intermediates", &BoundSet::intermediates)
        .def("__repr__", [](const BoundSet& b) {
            return "BoundSet(lower=" + format_double(b.lower) +
                   ", upper=" + format_double(b.upper) + ", variant=" +
                   to_string(b.variant) + ", branch=" + to_string(b.branch) + ")";
        });

    m.def("convention_power", &convention_power, py::arg("lam"), py::arg("K"));
    m.def("eps_max_closed_form", &eps_max_closed_form, py::arg("A"), py::arg("B"));
    m.def("dirichlet_lower_bound", &dirichlet_lower_bound, py::arg("g"), py::arg("lam"));
    m.def("dirichlet_lower_bound_weak", &dirichlet_lower_bound_weak, py::arg("g"), py::arg("lam"));
    m.def("dirichlet_upper_bound", &dirichlet_upper_bound, py::arg("g"),
          py::arg("lam"), py::arg("variant"));
    m.def("dirichlet_upper_bound_best", &dirichlet_upper_bound_best, py::arg("g"), py::arg("lam"));
    m.def(
        "dirichlet_lower_bound_sup_t",
        [](const GeometryParams& g, double lam, std::vector<double> grid) {
            if (grid.empty()) grid = default_t_grid(g, lam);
            const SupTResult r = dirichlet_lower_bound_sup_t(g, lam, grid);
            return py::make_tuple(r.value, r.t_star);
        },
        py::arg("g"), py::arg("lam"), py::arg("t_grid") = std::vector<double>{});
    m.def("intro_c1_c2", &intro_c1_c2, py::arg("g"), py::arg("lambda1"));
    m.def("psi_gradient_bound_f", &psi_gradient_bound_f, py::arg("alpha"), py::arg("t"));
    m.def("neumann_upper_bound", &neumann_upper_bound, py::arg("K"), py::arg("lam"));
    m.def("neumann_lower_bound", &neumann_lower_bound, py::arg("g"), py::arg("lam"));

    py::class_<CurvatureData>(m, "CurvatureData")
        .def_readonly("K0", &CurvatureData::K0)
        .def_readonly("K_V", &CurvatureData::K_V)
        .def_readonly("theta", &CurvatureData::theta)
        .def_readonly("delta", &CurvatureData::delta)
        .def_readonly("alpha", &CurvatureData::alpha)
        .def_readonly("alpha_global", &CurvatureData::alpha_global)
        .def_readonly("cut_locus", &CurvatureData::cut_locus);

    py::class_<DomainSpec>(m, "DomainSpec")
        .def_readonly("length", &DomainSpec::length)
        .def_readonly("radius", &DomainSpec::radius)
        .def_readonly("dim", &DomainSpec::dim)
        .def_readonly("grid", &DomainSpec::grid)
        .def_readonly("lambda_dirichlet", &DomainSpec::lambda_dirichlet)
        .def_readonly("lambda_neumann", &DomainSpec::lambda_neumann);

    py::class_<Domain>(m, "Domain")
        .def_readonly("spec", &Domain::spec)
        .def_readonly("curv", &Domain::curv);

    m.def("make_interval",
          [](double L, const std::function<double(double)>& V, int n) {
              return V ? make_interval(L, V, n) : make_interval(L, {}, n);
          },
          py::arg("L"), py::arg("V") = py::none(), py::arg("n_interior") = 2048);
    m.def("make_ball", &make_ball, py::arg("d"), py::arg("R"),
          py::arg("n_interior") = 2048);
    m.def("make_circle", &make_circle, py::arg("L"), py::arg("n_nodes") = 2048);
    m.def("boundary_alpha_grid_sup", &boundary_alpha_grid_sup, py::arg("spec"));

    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("lam", &EigenPair::lambda)
        .def_readonly("phi", &EigenPair::phi)
        .def_readonly("dphi", &EigenPair::dphi)
        .def_readonly("norm_phi", &EigenPair::norm_phi)
        .def_readonly("norm_grad", &EigenPair::norm_grad)
        .def_readonly("norm_grad_boundary", &EigenPair::norm_grad_boundary);

    m.def("solve_interval",
          [](const DomainSpec& spec, const std::string& bc, int m_) {
              return solve_interval(spec,
                                    bc == "neumann" ? BoundaryCondition::Neumann
                                                    : BoundaryCondition::Dirichlet,
                                    m_);
          },
          py::arg("spec"), py::arg("bc") = "dirichlet", py::arg("m") = 1);
    m.def("solve_ball_radial", &solve_ball_radial, py::arg("spec"), py::arg("m") = 1);
    m.def("circle_modes", &circle_modes, py::arg("spec"), py::arg("m") = 1);
    m.def("gradient_ratio", &gradient_ratio, py::arg("eigenpair"));
    m.def("boundary_gradient", &boundary_gradient, py::arg("eigenpair"), py::arg("spec"));
    m.def("survival_series", &survival_series, py::arg("modes"), py::arg("spec"),
          py::arg("t"), py::arg("x"));

    py::class_<MCConfig>(m, "MCConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &MCConfig::n_paths)
        .def_readwrite("dt", &MCConfig::dt)
        .def_readwrite("seed", &MCConfig::seed)
        .def_readwrite("bridge_correction", &MCConfig::bridge_correction)
        .def_readwrite("n_threads", &MCConfig::n_threads)
        .def_readwrite("n_chunks", &MCConfig::n_chunks);

    py::class_<FptResult>(m, "FptResult")
        .def_readonly("estimate", &FptResult::estimate)
        .def_readonly("stderr", &FptResult::std_error)
        .def_readonly("exact", &FptResult::exact)
        .def_readonly("z_score", &FptResult::z_score)
        .def_readonly("n_paths", &FptResult::n_paths)
        .def("__repr__", [](const FptResult& r) {
            return "FptResult(estimate=" + format_double(r.estimate) +
                   ", exact=" + format_double(r.exact) +
                   ", z=" + format_double(r.z_score) + ")";
        });

    m.def("fpt_probability_exact", &fpt_probability_exact, py::arg("alpha"),
          py::arg("eps"), py::arg("t"));
    m.def("simulate_fpt", &simulate_fpt, py::arg("alpha"), py::arg("eps"),
          py::arg("t"), py::arg("cfg") = MCConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<SurvivalResult>(m, "SurvivalResult")
        .def_readonly("estimate", &SurvivalResult::estimate)
        .def_readonly("stderr", &SurvivalResult::std_error)
        .def_readonly("fpt_upper_bound", &SurvivalResult::fpt_upper_bound);

    m.def("simulate_killed_diffusion", &simulate_killed_diffusion, py::arg("domain"),
          py::arg("x"), py::arg("t"), py::arg("cfg") = MCConfig{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<MartingaleCheck>(m, "MartingaleCheck")
        .def_readonly("t", &MartingaleCheck::t)
        .def_readonly("estimate", &MartingaleCheck::estimate)
        .def_readonly("stderr", &MartingaleCheck::std_error)
        .def_readonly("expected", &MartingaleCheck::expected)
        .def_readonly("z_score", &MartingaleCheck::z_score);

    m.def("martingale_check", &martingale_check, py::arg("eigenpair"),
          py::arg("domain"), py::arg("x"), py::arg("t_checkpoints"),
          py::arg("cfg") = MCConfig{}, py::call_guard<py::gil_scoped_release>());

    m.def("bessel_j0", &special::bessel_j0);
    m.def("bessel_j1", &special::bessel_j1);
    m.def("bessel_j0_zero", &special::bessel_j0_zero);
}
