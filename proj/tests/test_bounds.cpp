#include "eigengrad/bounds.hpp"

#include "eigengrad/errors.hpp"
#include "eigengrad/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace eigengrad;

namespace {

constexpr double kE = 2.7182818284590452354;
constexpr double kPi = 3.14159265358979323846;
constexpr double kJ01Sq = 5.7831859629467845; // first radial ball eigenvalue

GeometryParams geo(int d, double n, double K, double K_V, double alpha) {
    GeometryParams g;
    g.d = d;
    g.n = n;
    g.K = K;
    g.K_V = K_V;
    g.alpha = alpha;
    return g;
}

// Grid maximum of eps*A + sqrt(1-eps)*B, parameterised as eps = 1 - u^2 so
// the grid resolves the flat direction near eps = 1; independent oracle for
// the closed form.
double eps_max_grid(double A, double B, int n_pts) {
    double best = 0.0;
    const double du = 1.0 / n_pts;
    for (int i = 0; i <= n_pts; ++i) {
        const double u = i * du;
        const double v = (1.0 - u * u) * A + u * B;
        if (v > best) best = v;
    }
    return best;
}

ReferenceFunction constant_rf(std::size_t n = 64) {
    ReferenceFunction rf;
    rf.samples.assign(n, 1.0);
    rf.log_grad_sq.assign(n, 0.0);
    rf.l_log_f.assign(n, 0.0);
    rf.sup_norm = 1.0;
    return rf;
}

// f(x) = 1 + c x on a uniform grid over [0,1], analytic derivatives
ReferenceFunction linear_rf(double c, std::size_t n = 2049) {
    ReferenceFunction rf;
    rf.samples.resize(n);
    rf.log_grad_sq.resize(n);
    rf.l_log_f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        const double f = 1.0 + c * x;
        rf.samples[i] = f;
        rf.log_grad_sq[i] = c * c / (f * f);
        rf.l_log_f[i] = -c * c / (f * f);
    }
    rf.sup_norm = 1.0 + c;
    return rf;
}

} // namespace

TEST_CASE("convention power") {
    CHECK(convention_power(1.0, 0.0) == doctest::Approx(1.0 / kE).epsilon(1e-15));
    CHECK(convention_power(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // continuity at K = 0 against the expansion exp(-lam log1p(K/lam)/K)
    CHECK(std::abs(convention_power(2.0, 1e-9) - 1.0 / kE) < 1e-8);
    for (double x : {1e-10, 1e-7, 1e-6}) {
        const double diff = std::abs(convention_power(1.0, x) - 1.0 / kE);
        CHECK(diff <= 1.0 * x);
    }
    CHECK_THROWS_AS((void)convention_power(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)convention_power(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("ratio power handles negative K down to -lambda") {
    // (lam/(lam+K))^(lam/K) at lam=1, K=-0.5: 2^{-2} = 0.25
    CHECK(ratio_power(1.0, -0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ratio_power(1.0, -1.0) == 0.0);
    CHECK_THROWS_AS((void)ratio_power(1.0, -1.5), numeric_error);
}

TEST_CASE("eps max closed form") {
    CHECK(eps_max_closed_form(0.0, 3.0) == 3.0);
    CHECK(eps_max_closed_form(1.0, 1.0) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(eps_max_closed_form(1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eps_max_branch(1.0, 2.0) == Branch::Boundary);
    CHECK(eps_max_branch(1.0, 2.5) == Branch::LargeEigenvalue);
    CHECK(eps_max_branch(1.0, 1.0) == Branch::EpsInterior);
    CHECK_THROWS_AS((void)eps_max_closed_form(-1.0, 1.0), std::invalid_argument);

    std::mt19937 gen(20240801);
    std::uniform_real_distribution<double> U(0.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double A = U(gen), B = U(gen);
        CHECK(eps_max_closed_form(A, B) ==
              doctest::Approx(eps_max_grid(A, B, 20000)).epsilon(1e-7));
    }
}

TEST_CASE("dirichlet lower bound") {
    CHECK(dirichlet_lower_bound(geo(1, 1, 0, 0, 0), 1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(dirichlet_lower_bound(geo(1, 2, 1, 0, 0), 1.0) ==
          doctest::Approx(0.3535533905932738).epsilon(1e-14));
    CHECK(dirichlet_lower_bound(geo(1, 2, 0, 0, 0), kJ01Sq) ==
          doctest::Approx(1.0313862565109622).epsilon(1e-14));
    // K = 0: weak and sharp forms coincide
    CHECK(dirichlet_lower_bound_weak(geo(1, 2, 0, 0, 0), 3.7) ==
          doctest::Approx(dirichlet_lower_bound(geo(1, 2, 0, 0, 0), 3.7))
              .epsilon(1e-14));
    // negative K clipped to 0
    CHECK(dirichlet_lower_bound(geo(1, 1, -2, 0, 0), 1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
}

TEST_CASE("t-supremum matches the closed form") {
    GeometryParams g = geo(1, 1, 0, 0, 0);
    SupTResult r = dirichlet_lower_bound_sup_t(g, 1.0, default_t_grid(g, 1.0));
    CHECK(r.value == doctest::Approx(1.0 / kE).epsilon(1e-10));
    CHECK(r.t_star == doctest::Approx(1.0).epsilon(1e-5));

    g = geo(1, 2, 1, 0, 0);
    r = dirichlet_lower_bound_sup_t(g, 1.0, default_t_grid(g, 1.0));
    CHECK(r.value == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(r.t_star == doctest::Approx(0.69314718055994531).epsilon(1e-5));

    g = geo(1, 1, 2, 0, 0);
    r = dirichlet_lower_bound_sup_t(g, 3.0, default_t_grid(g, 3.0));
    CHECK(r.value == doctest::Approx(0.83656440278080205).epsilon(1e-10));

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> Un(1.0, 10.0), Uk(0.0, 5.0),
        Ul(0.1, 50.0);
    for (int i = 0; i < 40; ++i) {
        GeometryParams gg = geo(1, Un(gen), Uk(gen), 0, 0);
        const double lam = Ul(gen);
        const double closed = dirichlet_lower_bound(gg, lam);
        const SupTResult s =
            dirichlet_lower_bound_sup_t(gg, lam, default_t_grid(gg, lam));
        CHECK(s.value == doctest::Approx(closed * closed).epsilon(1e-8));
    }
    CHECK_THROWS_AS((void)dirichlet_lower_bound_sup_t(g, 1.0, {}),
                    std::invalid_argument);
}

TEST_CASE("dirichlet upper bound variants") {
    // alpha = 0, K_V = 0, lambda = 1: the convex-case constant
    BoundSet bs = dirichlet_upper_bound(geo(1, 1, 0, 0, 0), 1.0, UpperVariant::APrime);
    CHECK(bs.upper == doctest::Approx(1.8320806662242254).epsilon(1e-13));
    CHECK(bs.branch == Branch::EpsInterior);
    // same number as sqrt(2e/pi) + sqrt(pi e)/(4 sqrt(2))
    CHECK(bs.upper == doctest::Approx(std::sqrt(2.0 * kE / kPi) +
                                      std::sqrt(kPi * kE) / (4.0 * std::sqrt(2.0)))
                          .epsilon(1e-13));
    CHECK(bs.lower == doctest::Approx(0.6065306597126334).epsilon(1e-13));
    CHECK(bs.lower <= bs.upper);

    // alpha = 0, K_V = 3: B = 2, A' = sqrt(8/pi), interior branch
    bs = dirichlet_upper_bound(geo(1, 1, 0, 3, 0), 1.0, UpperVariant::APrime);
    CHECK(bs.intermediates.at("A_prime") ==
          doctest::Approx(1.5957691216057307).epsilon(1e-13));
    CHECK(bs.intermediates.at("B") == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(bs.branch == Branch::EpsInterior);
    CHECK(bs.upper == doctest::Approx(3.6641613324484509).epsilon(1e-13));

    // ball-like case: alpha = -1/2, lambda = j01^2, A* variant
    bs = dirichlet_upper_bound(geo(2, 2, 0, 0, -0.5), kJ01Sq, UpperVariant::AStar);
    CHECK(bs.intermediates.at("A_star") ==
          doctest::Approx(1.8777450800890587).epsilon(1e-12));
    CHECK(bs.upper == doctest::Approx(4.3653346107692961).epsilon(1e-12));
    CHECK(bs.branch == Branch::EpsInterior);

    // A-hat carries e / sqrt(e) weights of its own
    bs = dirichlet_upper_bound(geo(2, 2, 0, 0, -0.5), kJ01Sq, UpperVariant::AHat);
    CHECK(bs.intermediates.at("A_hat") ==
          doctest::Approx(1.4606912794765283).epsilon(1e-12));
    CHECK(bs.upper == doctest::Approx(4.9603734799990015).epsilon(1e-12));

    // strongly negative alpha reaches the large-eigenvalue branch
    bs = dirichlet_upper_bound(geo(1, 1, 0, 0, -3.0), 1.0, UpperVariant::AStar);
    CHECK(bs.branch == Branch::LargeEigenvalue);
    CHECK(bs.upper == doctest::Approx(1.6487212707001281).epsilon(1e-13));

    CHECK_THROWS_AS(
        (void)dirichlet_upper_bound(geo(1, 1, 0, 0, 0.5), 1.0, UpperVariant::AStar),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)dirichlet_upper_bound(geo(1, 1, 0, -10, 0), 1.0, UpperVariant::APrime),
        numeric_error);
}

TEST_CASE("upper bound equals sqrt(e) times an eps grid search") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> Ua(0.0, 2.0), Ul(0.5, 20.0), Uk(0.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double alpha = Ua(gen), lam = Ul(gen), KV = Uk(gen);
        const double mu = lam + KV;
        for (UpperVariant v : {UpperVariant::A, UpperVariant::APrime}) {
            const BoundSet bs = dirichlet_upper_bound(geo(1, 1, 0, KV, alpha), lam, v);
            const double A = v == UpperVariant::A
                                 ? bs.intermediates.at("A")
                                 : bs.intermediates.at("A_prime");
            const double grid = eps_max_grid(A, std::sqrt(mu), 200000);
            CHECK(bs.upper ==
                  doctest::Approx(std::sqrt(kE) * grid).epsilon(1e-9));
        }
        // variant A is at least as sharp as A' for alpha >= 0
        const double uA =
            dirichlet_upper_bound(geo(1, 1, 0, KV, alpha), lam, UpperVariant::A).upper;
        const double uAp =
            dirichlet_upper_bound(geo(1, 1, 0, KV, alpha), lam, UpperVariant::APrime)
                .upper;
        CHECK(uA <= uAp * (1.0 + 1e-14));
    }
}

TEST_CASE("admissible variants follow the sign of alpha") {
    CHECK(admissible_variants(1.0).size() == 3);
    CHECK(admissible_variants(-1.0).size() == 3);
    CHECK(admissible_variants(0.0).size() == 6);
    const BoundSet best = dirichlet_upper_bound_best(geo(1, 1, 0, 0, 0), 1.0);
    CHECK(best.upper <= 1.8320806662242254 * (1.0 + 1e-14));
}

TEST_CASE("eigenvalue-independent constants c1, c2") {
    auto [c1, c2] = intro_c1_c2(geo(1, 1, 0, 0, 0), 1.0);
    CHECK(c1 == doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(c2 == doctest::Approx(1.8320806662242254).epsilon(1e-13));

    std::tie(c1, c2) = intro_c1_c2(geo(2, 2, 0, 0, 0), kJ01Sq);
    CHECK(c1 == doctest::Approx(0.4288819424803534).epsilon(1e-13));

    std::tie(c1, c2) = intro_c1_c2(geo(1, 1, 1, 0, 1.0), 1.0);
    CHECK(c1 == doctest::Approx(0.4288819424803534).epsilon(1e-13));
    CHECK(c2 == doctest::Approx(5.4213357362366184).epsilon(1e-13));
}

TEST_CASE("boundary-gradient bound f(alpha)") {
    CHECK(psi_gradient_bound_f(0.0, 1.0) ==
          doctest::Approx(0.7978845608028654).epsilon(1e-14));
    CHECK(psi_gradient_bound_f(1.0, 1.0) ==
          doctest::Approx(2.1666309411753726).epsilon(1e-13));
    CHECK(psi_gradient_bound_f(-1.0, 1.0) ==
          doctest::Approx(0.1666309411753726).epsilon(1e-12));
    // f(alpha) - alpha is even
    CHECK(psi_gradient_bound_f(-2.0, 1.0) ==
          doctest::Approx(psi_gradient_bound_f(2.0, 1.0) - 4.0).epsilon(1e-12));
    // bracketing from the spec'd caps and tangent
    CHECK(psi_gradient_bound_f(1.0, 1.0) <= 2.19682 + 1e-5);
    CHECK(psi_gradient_bound_f(1.0, 1.0) >= 1.79788 - 1e-5);
    CHECK_THROWS_AS((void)psi_gradient_bound_f(1.0, 0.0), std::invalid_argument);

    // quadrature route as an independent oracle for the erf closed form
    for (double t : {0.5, 1.0, 2.0}) {
        for (double a : {-2.0, -0.7, 0.0, 0.4, 1.3, 3.0}) {
            const double aa = std::abs(a);
            const double integral = quad::integrate(
                [t](double s) { return std::exp(-0.5 * s * s * t); }, 0.0, aa,
                1e-10, 0.0);
            const double oracle =
                std::sqrt(2.0 / (kPi * t)) * std::exp(-0.5 * a * a * t) + a +
                aa * std::sqrt(2.0 * t / kPi) * integral;
            CHECK(psi_gradient_bound_f(a, t) ==
                  doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("f(alpha) caps and curvature") {
    for (double t : {0.25, 1.0, 4.0}) {
        for (double a : {-3.0, -1.0, -0.2, 0.0, 0.2, 1.0, 3.0}) {
            const double f = psi_gradient_bound_f(a, t);
            CHECK(f <= psi_gradient_cap_min(a, t) + 1e-8);
            CHECK(f <= psi_gradient_cap_quadratic(a, t) + 1e-8);
        }
    }
    // finite-difference second derivative against sqrt(2t/pi) e^{-a^2 t/2}
    const double h = 1e-4;
    for (double t : {0.5, 1.0}) {
        for (double a : {-1.0, 0.0, 0.5, 2.0}) {
            const double fdd = (psi_gradient_bound_f(a + h, t) -
                                2.0 * psi_gradient_bound_f(a, t) +
                                psi_gradient_bound_f(a - h, t)) /
                               (h * h);
            const double exact =
                std::sqrt(2.0 * t / kPi) * std::exp(-0.5 * a * a * t);
            CHECK(std::abs(fdd - exact) < 1e-6);
        }
    }
}

TEST_CASE("neumann bounds") {
    CHECK(neumann_upper_bound(0.0, 1.0) ==
          doctest::Approx(1.3154892469589138).epsilon(1e-14));
    CHECK(neumann_upper_bound(1.0, 1.0) ==
          doctest::Approx(1.5957691216057307).epsilon(1e-14));
    CHECK(neumann_upper_bound(-0.5, 1.0) ==
          doctest::Approx(1.1283791670955126).epsilon(1e-14));
    CHECK_THROWS_AS((void)neumann_upper_bound(-2.0, 1.0), numeric_error);

    CHECK(neumann_lower_bound(geo(1, 1, 0, 0, 0), 1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(neumann_lower_bound(geo(1, 1, 0, 0, 0), 4.0) ==
          doctest::Approx(1.2130613194252668).epsilon(1e-14));
    CHECK(neumann_lower_bound(geo(1, 3, 2, 0, 0), 2.0) ==
          doctest::Approx(0.40824829046386302).epsilon(1e-14));

    // chain: weak forms bracket the sharp middle expressions
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> Uk(-0.4, 3.0), Ul(0.5, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double K = Uk(gen), lam = Ul(gen);
        CHECK(neumann_upper_bound(K, lam) <=
              neumann_upper_bound_weak(K, lam) * (1.0 + 1e-12));
        GeometryParams g = geo(1, 2, K, 0, 0);
        CHECK(neumann_lower_bound(g, lam) >=
              neumann_lower_bound_weak(g, lam) * (1.0 - 1e-12));
    }
}

TEST_CASE("c_eps(f) and K(f)") {
    const ReferenceFunction one = constant_rf();
    CHECK(compute_c_eps_f(one, 0.5, 0.0, 0.0, CEpsMode::SplitK) == 0.0);
    CHECK(compute_c_eps_f(one, 0.3, 2.0, 1.0, CEpsMode::SplitK) ==
          doctest::Approx(1.3).epsilon(1e-14));
    CHECK(compute_c_eps_f(one, 0.3, 2.0, 1.0, CEpsMode::ConstantK) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)compute_c_eps_f(one, 1.0, 0, 0, CEpsMode::SplitK),
                    std::invalid_argument);

    CHECK(compute_K_f(one, 0.0) == 0.0);
    CHECK(compute_K_f(one, -1.0) == -1.0);
    // f = 1 + x on [0,1]: sup(2/(1+x)^2 + 1/(1+x)^2) = 3 at x = 0
    CHECK(compute_K_f(linear_rf(1.0), 0.0) == doctest::Approx(3.0).epsilon(1e-12));

    // f = 1 + x^2: grid supremum stable under refinement (brute force at 2x)
    auto quad_rf = [](std::size_t n) {
        ReferenceFunction rf;
        rf.samples.resize(n);
        rf.log_grad_sq.resize(n);
        rf.l_log_f.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / (n - 1);
            const double f = 1.0 + x * x;
            const double dlf = 2.0 * x / f;
            rf.samples[i] = f;
            rf.log_grad_sq[i] = dlf * dlf;
            rf.l_log_f[i] = 2.0 / f - dlf * dlf;
        }
        rf.sup_norm = 2.0;
        return rf;
    };
    const double c1x = compute_c_eps_f(quad_rf(2049), 0.5, 0.0, 0.0, CEpsMode::ConstantK);
    const double c2x = compute_c_eps_f(quad_rf(4097), 0.5, 0.0, 0.0, CEpsMode::ConstantK);
    CHECK(c1x == doctest::Approx(c2x).epsilon(1e-6));

    ReferenceFunction bad = constant_rf();
    bad.samples.assign(bad.samples.size(), 2.0); // inf != 1
    CHECK_THROWS_AS((void)compute_K_f(bad, 0.0), std::invalid_argument);
}

TEST_CASE("reference-function lower bound optimisation") {
    const ReferenceFunction one = constant_rf();
    GeometryParams g = geo(1, 1, 0, 0, 0);
    // constant f: default grid reaches the eps -> 1 closure point exactly
    CHECK(reference_function_lower_bound(one, g, 1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
    CHECK(reference_function_lower_bound(one, g, 4.0) ==
          doctest::Approx(1.2130613194252668).epsilon(1e-14));

    // explicit grid stops at its own maximum
    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    CHECK(reference_function_lower_bound(one, g, 1.0, grid) ==
          doctest::Approx(0.60349038663406056).epsilon(1e-12));

    // degenerate single-point grid evaluates there and only there
    GeometryParams g2 = geo(2, 2, 1, 1, 0);
    CHECK(reference_function_lower_bound(one, g2, 1.0, {0.5}) ==
          doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS((void)reference_function_lower_bound(one, g, 1.0, {}), std::invalid_argument);

    // non-constant f keeps the maximiser interior and stays below the ratio
    const ReferenceFunction lin = linear_rf(1.0);
    const double lb = reference_function_lower_bound(lin, g, 9.8696044010893586);
    CHECK(lb > 0.0);
    CHECK(lb < kPi); // Neumann mode ratio on [0,1]
}

TEST_CASE("geometry validation") {
    GeometryParams g = geo(2, 1, 0, 0, 0); // n < d
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK(alpha0_from_boundary_constants(2.0, 1.0, 3) ==
          doctest::Approx(1.0).epsilon(1e-14)); // max(2, sqrt(2))/2
    CHECK(alpha_from_boundary_constants(0.0, 0.0, 1, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)alpha0_from_boundary_constants(-1.0, 0.0, 2),
                    std::invalid_argument);
}
