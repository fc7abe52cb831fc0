#include "eigengrad/eigensolver.hpp"

#include "eigengrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eigengrad {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off; // size n-1
};

// Number of eigenvalues of T below x (Sturm sequence count). Zero pivots
// are clamped to -pivmin after each update and counted as negative, which
// keeps the count monotone when x hits an eigenvalue of a leading minor.
int sturm_count(const SymTridiag& T, double x, double pivmin) {
    int count = 0;
    double q = T.diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q <= 0.0) ++count;
    for (std::size_t i = 1; i < T.diag.size(); ++i) {
        q = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q <= 0.0) ++count;
    }
    return count;
}

// Lowest m eigenvalues by bisection on the Sturm count.
std::vector<double> lowest_eigenvalues(const SymTridiag& T, int m) {
    const std::size_t n = T.diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double el = i > 0 ? std::abs(T.off[i - 1]) : 0.0;
        const double er = i + 1 < n ? std::abs(T.off[i]) : 0.0;
        lo = std::min(lo, T.diag[i] - el - er);
        hi = std::max(hi, T.diag[i] + el + er);
        emax = std::max(emax, std::max(el, er));
    }
    const double pivmin = std::max(emax * emax, 1.0) * 1e-292;
    std::vector<double> lams(m);
    for (int k = 0; k < m; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 120 && b - a > 1e-15 * (std::abs(a) + std::abs(b) + 1.0); ++it) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(T, mid, pivmin) >= k + 1)
                b = mid;
            else
                a = mid;
        }
        lams[k] = 0.5 * (a + b);
    }
    return lams;
}

// Tridiagonal solve (T - s I) x = b with partial pivoting (gttrf/gtts2 style).
void shifted_solve(const SymTridiag& T, double s, std::vector<double>& b) {
    const std::size_t n = T.diag.size();
    std::vector<double> dl(T.off), d(n), du(T.off), du2(n >= 2 ? n - 2 : 0, 0.0);
    std::vector<char> piv(n >= 1 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = T.diag[i] - s;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = 1e-300;
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            if (i + 2 < n) du2[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - fact * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            piv[i] = 1;
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!piv[i]) {
            b[i + 1] -= dl[i] * b[i];
        } else {
            const double tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - dl[i] * b[i];
        }
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n; ii >= 3; --ii) {
        const std::size_t i = ii - 3;
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

std::vector<double> inverse_iteration(const SymTridiag& T, double lambda) {
    const std::size_t n = T.diag.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = ((i * 2654435761u + 12345u) % 1000u) / 999.0 - 0.5;
    for (int it = 0; it < 3; ++it) {
        shifted_solve(T, lambda, v);
        double mx = 0.0;
        for (double x : v) mx = std::max(mx, std::abs(x));
        if (mx == 0.0) throw numeric_error("inverse iteration: zero vector");
        for (double& x : v) x /= mx;
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    return v;
}

// Quadratic refinement of the sup of |f| from samples: fits a parabola to
// f^2 around the interior argmax; endpoint argmax returns the sample value.
double refined_sup_abs(const std::vector<double>& f) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (std::abs(f[i]) > std::abs(f[k])) k = i;
    double best = std::abs(f[k]);
    if (k > 0 && k + 1 < f.size()) {
        const double y0 = f[k - 1] * f[k - 1];
        const double y1 = f[k] * f[k];
        const double y2 = f[k + 1] * f[k + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double v = y1 - (y2 - y0) * (y2 - y0) / (8.0 * denom);
            best = std::max(best, std::sqrt(std::max(v, 0.0)));
        }
    }
    return best;
}

// 4th-order first derivative on a uniform grid.
std::vector<double> differentiate(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> df(n);
    if (n < 5) throw std::invalid_argument("differentiate: need >= 5 samples");
    df[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    df[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        df[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    df[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
    df[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
    return df;
}

void finalize_pair(EigenPair& ep, const DomainSpec& spec) {
    const double h = spec.spacing();
    // sup-normalise with sign fixed at the argmax
    std::size_t k = 0;
    for (std::size_t i = 1; i < ep.phi.size(); ++i)
        if (std::abs(ep.phi[i]) > std::abs(ep.phi[k])) k = i;
    const double sup = refined_sup_abs(ep.phi);
    const double scale = (ep.phi[k] < 0.0 ? -sup : sup);
    for (double& x : ep.phi) x /= scale;
    ep.norm_phi = 1.0;

    ep.dphi = differentiate(ep.phi, h);
    if (spec.kind == DomainKind::Ball) ep.dphi[0] = 0.0; // radial symmetry

    double bnd = 0.0;
    if (spec.kind == DomainKind::Interval)
        bnd = std::max(std::abs(ep.dphi.front()), std::abs(ep.dphi.back()));
    else if (spec.kind == DomainKind::Ball)
        bnd = std::abs(ep.dphi.back());
    ep.norm_grad_boundary = bnd;
    ep.norm_grad = std::max(refined_sup_abs(ep.dphi), bnd);
}

} // namespace

std::vector<EigenPair> solve_interval(const DomainSpec& spec,
                                      BoundaryCondition bc, int m) {
    if (spec.kind != DomainKind::Interval)
        throw std::invalid_argument("solve_interval: spec must be an interval");
    if (bc == BoundaryCondition::Closed)
        throw std::invalid_argument("solve_interval: use circle_modes for closed domains");
    const std::size_t nodes = spec.grid.size();
    if (m < 1 || static_cast<std::size_t>(m) > nodes / 4)
        throw std::invalid_argument("solve_interval: m out of range for this grid");
    const double h = spec.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const bool has_v = !spec.drift_potential.empty();
    auto V = [&](std::size_t i) { return has_v ? spec.drift_potential[i] : 0.0; };

    SymTridiag T;
    const bool dirichlet = bc == BoundaryCondition::Dirichlet;
    const std::size_t n = dirichlet ? nodes - 2 : nodes;
    T.diag.resize(n);
    T.off.resize(n - 1);
    if (dirichlet) {
        // unknown i sits at grid node i+1; symmetrised weights make the
        // off-diagonal exactly -1/h^2
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t g = i + 1;
            T.diag[i] = (std::exp(0.5 * (V(g + 1) - V(g))) +
                         std::exp(0.5 * (V(g - 1) - V(g)))) * inv_h2;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) T.off[i] = -inv_h2;
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i)
            T.diag[i] = (std::exp(0.5 * (V(i + 1) - V(i))) +
                         std::exp(0.5 * (V(i - 1) - V(i)))) * inv_h2;
        T.diag[0] = 2.0 * std::exp(0.5 * (V(1) - V(0))) * inv_h2;
        T.diag[n - 1] = 2.0 * std::exp(0.5 * (V(n - 2) - V(n - 1))) * inv_h2;
        for (std::size_t i = 0; i + 1 < n; ++i) T.off[i] = -inv_h2;
        T.off[0] = -std::sqrt(2.0) * inv_h2;
        T.off[n - 2] = -std::sqrt(2.0) * inv_h2;
    }

    const int extra = dirichlet ? 0 : 1; // Neumann: drop the constant mode
    const std::vector<double> lams = lowest_eigenvalues(T, m + extra);
    if (!dirichlet) {
        const double scale = std::max(1.0, std::abs(lams[1]));
        if (std::abs(lams[0]) > 1e-6 * scale)
            throw numeric_error("solve_interval: Neumann constant mode not found");
    }

    std::vector<EigenPair> out;
    out.reserve(m);
    for (int k = extra; k < m + extra; ++k) {
        const std::vector<double> psi = inverse_iteration(T, lams[k]);
        EigenPair ep;
        ep.lambda = lams[k];
        ep.bc = bc;
        ep.phi.assign(nodes, 0.0);
        if (dirichlet) {
            for (std::size_t i = 0; i < n; ++i)
                ep.phi[i + 1] = psi[i] * std::exp(-0.5 * V(i + 1));
        } else {
            for (std::size_t i = 0; i < n; ++i)
                ep.phi[i] = psi[i] * std::exp(-0.5 * V(i));
            ep.phi[0] *= std::sqrt(2.0);
            ep.phi[n - 1] *= std::sqrt(2.0);
        }
        finalize_pair(ep, spec);
        out.push_back(std::move(ep));
    }
    return out;
}

std::vector<EigenPair> solve_ball_radial(const DomainSpec& spec, int m) {
    if (spec.kind != DomainKind::Ball)
        throw std::invalid_argument("solve_ball_radial: spec must be a ball");
    const std::size_t nodes = spec.grid.size();
    if (m < 1 || static_cast<std::size_t>(m) > nodes / 4)
        throw std::invalid_argument("solve_ball_radial: m out of range for this grid");
    const double h = spec.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const int d = spec.dim;

    // unknowns at r_0 = 0 .. r_{n-1}; Dirichlet node at r = R excluded
    const std::size_t n = nodes - 1;
    std::vector<double> mass(n);
    mass[0] = std::pow(0.5 * h, d) / d;
    for (std::size_t i = 1; i < n; ++i)
        mass[i] = h * std::pow(spec.grid[i], d - 1);

    SymTridiag T;
    T.diag.resize(n);
    T.off.resize(n - 1);
    auto w_half = [&](double r) { return std::pow(r, d - 1); };
    T.diag[0] = 2.0 * d * inv_h2;
    for (std::size_t i = 1; i < n; ++i) {
        const double r = spec.grid[i];
        T.diag[i] = (w_half(r - 0.5 * h) + w_half(r + 0.5 * h)) * inv_h2 /
                    std::pow(r, d - 1);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double wm = w_half(spec.grid[i] + 0.5 * h);
        const double Mij = i == 0 ? -2.0 * d * inv_h2
                                  : -wm * inv_h2 / std::pow(spec.grid[i], d - 1);
        T.off[i] = Mij * std::sqrt(mass[i] / mass[i + 1]);
    }

    const std::vector<double> lams = lowest_eigenvalues(T, m);
    std::vector<EigenPair> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        const std::vector<double> psi = inverse_iteration(T, lams[k]);
        EigenPair ep;
        ep.lambda = lams[k];
        ep.bc = BoundaryCondition::Dirichlet;
        ep.phi.assign(nodes, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            ep.phi[i] = psi[i] / std::sqrt(mass[i]);
        finalize_pair(ep, spec);
        out.push_back(std::move(ep));
    }
    return out;
}

std::vector<EigenPair> circle_modes(const DomainSpec& spec, int m) {
    if (spec.kind != DomainKind::Circle)
        throw std::invalid_argument("circle_modes: spec must be a circle");
    std::vector<EigenPair> out;
    out.reserve(m);
    for (int k = 1; k <= m; ++k) {
        const double freq = 2.0 * kPi * k / spec.length;
        EigenPair ep;
        ep.lambda = freq * freq;
        ep.bc = BoundaryCondition::Closed;
        ep.phi.resize(spec.grid.size());
        ep.dphi.resize(spec.grid.size());
        for (std::size_t i = 0; i < spec.grid.size(); ++i) {
            ep.phi[i] = std::sin(freq * spec.grid[i]);
            ep.dphi[i] = freq * std::cos(freq * spec.grid[i]);
        }
        ep.norm_phi = 1.0;
        ep.norm_grad = freq;
        ep.norm_grad_boundary = 0.0;
        out.push_back(std::move(ep));
    }
    return out;
}

double gradient_ratio(const EigenPair& ep) {
    return ep.norm_grad / ep.norm_phi;
}

double boundary_gradient(const EigenPair& ep, const DomainSpec& spec) {
    if (!spec.has_boundary())
        throw std::invalid_argument("boundary_gradient: empty boundary");
    if (spec.kind == DomainKind::Interval)
        return std::max(std::abs(ep.dphi.front()), std::abs(ep.dphi.back()));
    return std::abs(ep.dphi.back());
}

double weighted_inner_product(const DomainSpec& spec,
                              const std::vector<double>& u,
                              const std::vector<double>& v) {
    if (u.size() != spec.grid.size() || v.size() != spec.grid.size())
        throw std::invalid_argument("weighted_inner_product: size mismatch");
    const double h = spec.spacing();
    const std::size_t n = u.size();
    double sum = 0.0;
    if (spec.kind == DomainKind::Circle) {
        for (std::size_t i = 0; i < n; ++i) sum += h * u[i] * v[i];
        return sum;
    }
    if (spec.kind == DomainKind::Interval) {
        const bool has_v = !spec.drift_potential.empty();
        for (std::size_t i = 0; i < n; ++i) {
            const double mi = (i == 0 || i + 1 == n) ? 0.5 * h : h;
            const double w = has_v ? std::exp(spec.drift_potential[i]) : 1.0;
            sum += mi * w * u[i] * v[i];
        }
        return sum;
    }
    const int d = spec.dim;
    for (std::size_t i = 0; i < n; ++i) {
        double mi;
        if (i == 0)
            mi = std::pow(0.5 * h, d) / d;
        else if (i + 1 == n)
            mi = 0.5 * h * std::pow(spec.grid[i], d - 1);
        else
            mi = h * std::pow(spec.grid[i], d - 1);
        sum += mi * u[i] * v[i];
    }
    return sum;
}

namespace {

double series_coefficient(const std::vector<double>& phi,
                          const DomainSpec& spec) {
    const std::vector<double> ones(spec.grid.size(), 1.0);
    return weighted_inner_product(spec, ones, phi) /
           weighted_inner_product(spec, phi, phi);
}

} // namespace

double survival_series(const std::vector<EigenPair>& modes,
                       const DomainSpec& spec, double t, double x) {
    double sum = 0.0;
    for (const EigenPair& ep : modes)
        sum += series_coefficient(ep.phi, spec) *
               std::exp(-0.5 * ep.lambda * t) * interp_grid(spec.grid, ep.phi, x);
    return sum;
}

double survival_series_boundary_gradient(const std::vector<EigenPair>& modes,
                                         const DomainSpec& spec, double t) {
    double sum = 0.0;
    for (const EigenPair& ep : modes) {
        const double dn = spec.kind == DomainKind::Ball ? -ep.dphi.back()
                                                        : ep.dphi.front();
        sum += series_coefficient(ep.phi, spec) *
               std::exp(-0.5 * ep.lambda * t) * dn;
    }
    return sum;
}

double interp_grid(const std::vector<double>& grid,
                   const std::vector<double>& values, double x) {
    const double h = grid[1] - grid[0];
    const double s = (x - grid.front()) / h;
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(s));
    i = std::max<std::ptrdiff_t>(0, std::min(i, n - 2));
    const double w = s - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

} // namespace eigengrad
