#include "eigengrad/eigensolver.hpp"

#include "eigengrad/bounds.hpp"
#include "eigengrad/domains.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace eigengrad;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kJ01Sq = 5.7831859629467845;
}

TEST_CASE("interval Dirichlet modes recover sin(kx)") {
    const Domain dom = make_interval(kPi, {}, 4096);
    const auto modes = solve_interval(dom.spec, BoundaryCondition::Dirichlet, 3);
    REQUIRE(modes.size() == 3);
    for (int k = 1; k <= 3; ++k) {
        const EigenPair& ep = modes[k - 1];
        CHECK(ep.lambda == doctest::Approx(k * k).epsilon(1e-5 / (k * k)));
        CHECK(gradient_ratio(ep) == doctest::Approx(k).epsilon(1e-7));
        CHECK(boundary_gradient(ep, dom.spec) == doctest::Approx(k).epsilon(1e-6));
        CHECK(ep.norm_phi == 1.0);
        CHECK(ep.phi.front() == 0.0);
        CHECK(ep.phi.back() == 0.0);
        CHECK(ep.norm_grad_boundary <= ep.norm_grad * (1.0 + 1e-14));
    }
}

TEST_CASE("interval Neumann modes recover cos(kx) and drop the constant") {
    const Domain dom = make_interval(kPi, {}, 4096);
    const auto modes = solve_interval(dom.spec, BoundaryCondition::Neumann, 2);
    REQUIRE(modes.size() == 2);
    for (int k = 1; k <= 2; ++k) {
        CHECK(modes[k - 1].lambda == doctest::Approx(k * k).epsilon(1e-5));
        CHECK(gradient_ratio(modes[k - 1]) == doctest::Approx(k).epsilon(1e-7));
        CHECK(modes[k - 1].norm_grad_boundary < 1e-7);
    }
}

TEST_CASE("unit interval first eigenvalue") {
    const Domain dom = make_interval(1.0);
    const auto modes = solve_interval(dom.spec, BoundaryCondition::Dirichlet, 1);
    CHECK(modes[0].lambda == doctest::Approx(kPi * kPi).epsilon(1e-4 / 10));
}

TEST_CASE("ball radial modes") {
    const Domain d2 = make_ball(2, 1.0);
    const auto m2 = solve_ball_radial(d2.spec, 1);
    CHECK(m2[0].lambda == doctest::Approx(kJ01Sq).epsilon(1e-3 / 5.8));
    CHECK(gradient_ratio(m2[0]) ==
          doctest::Approx(1.3992843624867659).epsilon(1e-3 / 1.4));
    CHECK(boundary_gradient(m2[0], d2.spec) ==
          doctest::Approx(1.2484591696955067).epsilon(1e-3));
    // J0 peaks at the centre
    CHECK(std::abs(m2[0].phi[0]) == doctest::Approx(1.0).epsilon(1e-9));

    const Domain d3 = make_ball(3, 1.0);
    const auto m3 = solve_ball_radial(d3.spec, 1);
    CHECK(m3[0].lambda == doctest::Approx(kPi * kPi).epsilon(1e-4 / 9.8));
}

TEST_CASE("circle closed-form modes") {
    const Domain dom = make_circle(2.0 * kPi);
    const auto modes = circle_modes(dom.spec, 2);
    CHECK(modes[0].lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gradient_ratio(modes[0]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(modes[1].lambda == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(gradient_ratio(modes[1]) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)boundary_gradient(modes[0], dom.spec),
                    std::invalid_argument);
    // ratio = sqrt(lambda) sits between the closed-problem bounds (n=1, K=0)
    GeometryParams g;
    CHECK(neumann_lower_bound(g, 1.0) <= 1.0);
    CHECK(neumann_upper_bound(0.0, 1.0) >= 1.0);
}

TEST_CASE("second-order eigenvalue convergence") {
    const double exact = kPi * kPi;
    double errs[2];
    int idx = 0;
    for (int n : {1024, 2048}) {
        const Domain dom = make_interval(1.0, {}, n);
        errs[idx++] = std::abs(
            solve_interval(dom.spec, BoundaryCondition::Dirichlet, 1)[0].lambda -
            exact);
    }
    const double rate = errs[0] / errs[1];
    CHECK(rate > 3.5);
    CHECK(rate < 4.5);
}

TEST_CASE("modes are orthogonal in the weighted inner product") {
    const Domain flat = make_interval(kPi, {}, 1024);
    const Domain drift = make_interval(1.0, [](double x) { return x * x; }, 1024);
    for (const Domain* dom : {&flat, &drift}) {
        const auto modes = solve_interval(dom->spec, BoundaryCondition::Dirichlet, 4);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            for (std::size_t j = i + 1; j < modes.size(); ++j) {
                const double ip =
                    weighted_inner_product(dom->spec, modes[i].phi, modes[j].phi);
                const double ni =
                    weighted_inner_product(dom->spec, modes[i].phi, modes[i].phi);
                const double nj =
                    weighted_inner_product(dom->spec, modes[j].phi, modes[j].phi);
                CHECK(std::abs(ip) / std::sqrt(ni * nj) < 1e-10);
            }
        }
    }
}

TEST_CASE("sandwich property on the catalog domains") {
    // flat interval, Dirichlet
    {
        const Domain dom = make_interval(kPi);
        GeometryParams g;
        g.alpha = dom.curv.alpha;
        for (const EigenPair& ep :
             solve_interval(dom.spec, BoundaryCondition::Dirichlet, 5)) {
            const double ratio = gradient_ratio(ep);
            const BoundSet bs = dirichlet_upper_bound_best(g, ep.lambda);
            CHECK(bs.lower <= ratio);
            CHECK(ratio <= bs.upper);
        }
    }
    // ball, alpha < 0 branch
    {
        const Domain dom = make_ball(2, 1.0);
        GeometryParams g;
        g.d = 2;
        g.n = 2;
        g.alpha = dom.curv.alpha;
        for (const EigenPair& ep : solve_ball_radial(dom.spec, 3)) {
            const double ratio = gradient_ratio(ep);
            const BoundSet bs = dirichlet_upper_bound_best(g, ep.lambda);
            CHECK(bs.lower <= ratio);
            CHECK(ratio <= bs.upper);
        }
    }
    // drifted interval: CD constant for the lower route, K_V for the upper
    {
        const Domain dom = make_interval(1.0, [](double x) { return x * x; });
        GeometryParams g;
        g.n = 2.0;
        g.K = cd_constant_for_interval(dom, g.n);
        g.K_V = dom.curv.K_V;
        g.alpha = dom.curv.alpha;
        for (const EigenPair& ep :
             solve_interval(dom.spec, BoundaryCondition::Dirichlet, 3)) {
            const double ratio = gradient_ratio(ep);
            const BoundSet bs = dirichlet_upper_bound_best(g, ep.lambda);
            CHECK(bs.lower <= ratio);
            CHECK(ratio <= bs.upper);
        }
        // Neumann counterpart (interval boundary is trivially convex)
        for (const EigenPair& ep :
             solve_interval(dom.spec, BoundaryCondition::Neumann, 3)) {
            const double ratio = gradient_ratio(ep);
            CHECK(neumann_lower_bound(g, ep.lambda) <= ratio);
            CHECK(ratio <= neumann_upper_bound(g.K_V, ep.lambda));
        }
    }
}

TEST_CASE("boundary gradient dominated by e^{lambda t/2} f(alpha, t)") {
    // inf over a t grid of the martingale-route bound dominates the
    // boundary gradient, per eigenpair
    auto chain_bound = [](double lambda, double alpha) {
        double best = 1e300;
        for (int i = 0; i <= 200; ++i) {
            const double t = std::exp(-6.0 + 8.0 * i / 200.0) / std::max(lambda, 1.0);
            best = std::min(best, std::exp(0.5 * lambda * t) *
                                      psi_gradient_bound_f(alpha, t));
        }
        return best;
    };
    const Domain dom = make_interval(kPi);
    for (const EigenPair& ep :
         solve_interval(dom.spec, BoundaryCondition::Dirichlet, 5)) {
        CHECK(boundary_gradient(ep, dom.spec) <=
              chain_bound(ep.lambda, dom.curv.alpha) * (1.0 + 1e-6));
    }
    const Domain ball = make_ball(2, 1.0);
    for (const EigenPair& ep : solve_ball_radial(ball.spec, 2)) {
        CHECK(boundary_gradient(ep, ball.spec) <=
              chain_bound(ep.lambda, ball.curv.alpha) * (1.0 + 1e-6));
    }
}

TEST_CASE("survival series on the flat interval") {
    const Domain dom = make_interval(kPi);
    const auto modes = solve_interval(dom.spec, BoundaryCondition::Dirichlet, 30);
    // frozen spectral sums for the L/2 generator at t = 1
    CHECK(survival_series(modes, dom.spec, 1.0, kPi / 2) ==
          doctest::Approx(0.76754496545576536).epsilon(1e-5));
    CHECK(survival_series_boundary_gradient(modes, dom.spec, 1.0) ==
          doctest::Approx(0.78640797968658941).epsilon(1e-5));
    // vanishes at the boundary, positive inside
    CHECK(std::abs(survival_series(modes, dom.spec, 1.0, 0.0)) < 1e-12);
    for (double x : {0.3, 1.0, 2.0, 2.8})
        CHECK(survival_series(modes, dom.spec, 1.0, x) > 0.0);
    // short horizons approach 1 in the bulk (30-mode truncation tail ~1e-6)
    CHECK(survival_series(modes, dom.spec, 0.1, kPi / 2) ==
          doctest::Approx(1.0).epsilon(1e-5));
    // dominated by the boundary-gradient bound at the boundary
    CHECK(survival_series_boundary_gradient(modes, dom.spec, 1.0) <=
          psi_gradient_bound_f(0.0, 1.0));
}

TEST_CASE("solver argument validation") {
    const Domain dom = make_interval(kPi, {}, 64);
    CHECK_THROWS_AS(
        (void)solve_interval(dom.spec, BoundaryCondition::Dirichlet, 60),
        std::invalid_argument);
    CHECK_THROWS_AS((void)solve_ball_radial(dom.spec, 1), std::invalid_argument);
    const Domain ball = make_ball(2, 1.0, 64);
    CHECK_THROWS_AS(
        (void)solve_interval(ball.spec, BoundaryCondition::Dirichlet, 1),
        std::invalid_argument);
    CHECK_THROWS_AS((void)circle_modes(ball.spec, 1), std::invalid_argument);
}

TEST_CASE("grid interpolation") {
    const std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> vals{0.0, 1.0, 4.0, 9.0};
    CHECK(interp_grid(grid, vals, 1.5) == doctest::Approx(2.5));
    CHECK(interp_grid(grid, vals, 0.0) == doctest::Approx(0.0));
    CHECK(interp_grid(grid, vals, 3.0) == doctest::Approx(9.0));
}
