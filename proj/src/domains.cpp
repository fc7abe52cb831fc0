#include "eigengrad/domains.hpp"

#include "eigengrad/errors.hpp"
#include "eigengrad/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eigengrad {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> uniform_grid(double a, double b, int n_nodes) {
    std::vector<double> g(n_nodes);
    const double h = (b - a) / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i) g[i] = a + h * i;
    g.back() = b;
    return g;
}

} // namespace

Domain make_interval(double L, const std::function<double(double)>& V,
                     int n_interior) {
    if (!(L > 0.0)) throw std::invalid_argument("make_interval: L must be > 0");
    if (n_interior < 16) throw std::invalid_argument("make_interval: grid too small");
    Domain dom;
    dom.spec.kind = DomainKind::Interval;
    dom.spec.length = L;
    dom.spec.dim = 1;
    dom.spec.grid = uniform_grid(0.0, L, n_interior + 2);

    if (V) {
        auto& vs = dom.spec.drift_potential;
        vs.resize(dom.spec.grid.size());
        for (std::size_t i = 0; i < vs.size(); ++i) {
            vs[i] = V(dom.spec.grid[i]);
            if (!std::isfinite(vs[i]))
                throw std::invalid_argument("make_interval: non-finite V sample");
        }
        const double h = dom.spec.spacing();
        // K_V = sup V''  (Ric - Hess_V = -V'' >= -K_V); central differences
        double sup_vpp = -std::numeric_limits<double>::infinity();
        double sup_vp = 0.0;
        for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
            const double vpp = (vs[i + 1] - 2.0 * vs[i] + vs[i - 1]) / (h * h);
            const double vp = (vs[i + 1] - vs[i - 1]) / (2.0 * h);
            sup_vpp = std::max(sup_vpp, vpp);
            sup_vp = std::max(sup_vp, std::abs(vp));
        }
        // one-sided V' at the ends for the global alpha
        sup_vp = std::max(sup_vp, std::abs((-3.0 * vs[0] + 4.0 * vs[1] - vs[2]) / (2.0 * h)));
        const std::size_t n = vs.size();
        sup_vp = std::max(sup_vp, std::abs((3.0 * vs[n - 1] - 4.0 * vs[n - 2] + vs[n - 3]) / (2.0 * h)));
        dom.curv.K_V = sup_vpp;
        dom.curv.alpha_global = 0.5 * sup_vp;
    } else {
        dom.spec.lambda_dirichlet.resize(16);
        dom.spec.lambda_neumann.resize(16);
        for (int k = 1; k <= 16; ++k) {
            const double lam = (k * kPi / L) * (k * kPi / L);
            dom.spec.lambda_dirichlet[k - 1] = lam;
            dom.spec.lambda_neumann[k - 1] = lam;
        }
    }
    dom.curv.cut_locus = {0.5 * L};
    dom.curv.alpha = V ? boundary_alpha_grid_sup(dom.spec) : 0.0;
    return dom;
}

Domain make_ball(int d, double R, int n_interior) {
    if (d < 2) throw std::invalid_argument("make_ball: d must be >= 2");
    if (!(R > 0.0)) throw std::invalid_argument("make_ball: R must be > 0");
    if (n_interior < 16) throw std::invalid_argument("make_ball: grid too small");
    Domain dom;
    dom.spec.kind = DomainKind::Ball;
    dom.spec.radius = R;
    dom.spec.dim = d;
    dom.spec.grid = uniform_grid(0.0, R, n_interior + 2);
    dom.curv.alpha = -(d - 1) / (2.0 * R);
    dom.curv.cut_locus = {0.0};
    if (d == 2) {
        for (int k = 1; k <= 3; ++k) {
            const double j = special::bessel_j0_zero(k);
            dom.spec.lambda_dirichlet.push_back(j * j / (R * R));
        }
    } else if (d == 3) {
        for (int k = 1; k <= 8; ++k)
            dom.spec.lambda_dirichlet.push_back((k * kPi / R) * (k * kPi / R));
    }
    return dom;
}

Domain make_circle(double L, int n_nodes) {
    if (!(L > 0.0)) throw std::invalid_argument("make_circle: L must be > 0");
    Domain dom;
    dom.spec.kind = DomainKind::Circle;
    dom.spec.length = L;
    dom.spec.dim = 1;
    dom.spec.grid.resize(n_nodes);
    const double h = L / n_nodes;
    for (int i = 0; i < n_nodes; ++i) dom.spec.grid[i] = h * i;
    for (int k = 1; k <= 16; ++k) {
        const double lam = (2.0 * kPi * k / L) * (2.0 * kPi * k / L);
        dom.spec.lambda_neumann.push_back(lam);
    }
    return dom;
}

double boundary_alpha_grid_sup(const DomainSpec& spec) {
    if (!spec.has_boundary())
        throw std::invalid_argument("boundary_alpha_grid_sup: domain has no boundary");
    const double h = spec.spacing();
    double sup = -std::numeric_limits<double>::infinity();
    if (spec.kind == DomainKind::Interval) {
        const double L = spec.length;
        const auto& vs = spec.drift_potential;
        for (std::size_t i = 1; i + 1 < spec.grid.size(); ++i) {
            const double x = spec.grid[i];
            if (std::abs(x - 0.5 * L) <= h) continue; // cut locus
            double vp = 0.0;
            if (!vs.empty()) vp = (vs[i + 1] - vs[i - 1]) / (2.0 * h);
            // rho = min(x, L-x): (1/2) L rho = (1/2) V' rho'
            sup = std::max(sup, 0.5 * vp * (x < 0.5 * L ? 1.0 : -1.0));
        }
        return sup;
    }
    // ball: (1/2) Delta (R - r) = -(d-1)/(2 r); exclude one cell around r = 0
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        const double r = spec.grid[i];
        if (r <= h) continue;
        sup = std::max(sup, -(spec.dim - 1) / (2.0 * r));
    }
    return sup;
}

double cd_constant_for_interval(const Domain& dom, double n) {
    if (dom.spec.kind != DomainKind::Interval)
        throw std::invalid_argument("cd_constant_for_interval: interval domains only");
    const auto& vs = dom.spec.drift_potential;
    if (vs.empty()) return 0.0;
    if (!(n > 1.0))
        throw std::invalid_argument("cd_constant_for_interval: need n > 1 with drift");
    const double h = dom.spec.spacing();
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
        const double vpp = (vs[i + 1] - 2.0 * vs[i] + vs[i - 1]) / (h * h);
        const double vp = (vs[i + 1] - vs[i - 1]) / (2.0 * h);
        sup = std::max(sup, vpp + vp * vp / (n - 1.0));
    }
    return sup;
}

} // namespace eigengrad
