#include "eigengrad/bounds.hpp"

#include "eigengrad/errors.hpp"
#include "eigengrad/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eigengrad {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtE = 1.6487212707001281468;
constexpr double kE = 2.7182818284590452354;

// Relative threshold below which the small-K series of the power terms is
// used; documented cutoff for the K -> 0 convention.
constexpr double kPowerCutoff = 1e-8;

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("lambda must be > 0");
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, int iters = 120) {
    const double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-16 * (std::abs(a) + std::abs(b)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

} // namespace

void GeometryParams::validate() const {
    if (d < 1) throw std::invalid_argument("GeometryParams: d must be >= 1");
    if (!(n >= d)) throw std::invalid_argument("GeometryParams: n must be >= d");
}

double alpha0_from_boundary_constants(double theta, double K0, int d) {
    if (K0 < 0.0 || theta < 0.0)
        throw std::invalid_argument("alpha0: theta and K0 must be >= 0");
    return 0.5 * std::max(theta, std::sqrt((d - 1) * K0));
}

double alpha_from_boundary_constants(double theta, double K0, int d,
                                     double grad_v_inf) {
    return alpha0_from_boundary_constants(theta, K0, d) + 0.5 * grad_v_inf;
}

std::string to_string(UpperVariant v) {
    switch (v) {
        case UpperVariant::A: return "A";
        case UpperVariant::APrime: return "A_prime";
        case UpperVariant::AStar: return "A_star";
        case UpperVariant::AHat: return "A_hat";
        case UpperVariant::SimplifiedPos: return "simplified_pos";
        case UpperVariant::SimplifiedNeg: return "simplified_neg";
    }
    return "?";
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::LargeEigenvalue: return "large_eigenvalue";
        case Branch::EpsInterior: return "eps_interior";
        case Branch::Boundary: return "boundary";
    }
    return "?";
}

std::optional<UpperVariant> upper_variant_from_string(const std::string& s) {
    if (s == "A") return UpperVariant::A;
    if (s == "A_prime" || s == "Aprime") return UpperVariant::APrime;
    if (s == "A_star" || s == "Astar") return UpperVariant::AStar;
    if (s == "A_hat" || s == "Ahat") return UpperVariant::AHat;
    if (s == "simplified_pos") return UpperVariant::SimplifiedPos;
    if (s == "simplified_neg") return UpperVariant::SimplifiedNeg;
    return std::nullopt;
}

bool variant_admissible(UpperVariant v, double alpha) {
    switch (v) {
        case UpperVariant::A:
        case UpperVariant::APrime:
        case UpperVariant::SimplifiedPos:
            return alpha >= 0.0;
        case UpperVariant::AStar:
        case UpperVariant::AHat:
        case UpperVariant::SimplifiedNeg:
            return alpha <= 0.0;
    }
    return false;
}

void ReferenceFunction::validate() const {
    if (samples.empty())
        throw std::invalid_argument("ReferenceFunction: empty samples");
    if (samples.size() != log_grad_sq.size() || samples.size() != l_log_f.size())
        throw std::invalid_argument("ReferenceFunction: field sizes disagree");
    const double inf = *std::min_element(samples.begin(), samples.end());
    if (std::abs(inf - 1.0) > 1e-9)
        throw std::invalid_argument("ReferenceFunction: inf of samples must be 1");
    if (sup_norm < 1.0)
        throw std::invalid_argument("ReferenceFunction: sup_norm must be >= 1");
}

bool ReferenceFunction::is_constant_one() const {
    for (double g : log_grad_sq)
        if (g != 0.0) return false;
    return sup_norm == 1.0;
}

// ---------------------------------------------------------------------------

double ratio_power(double lambda, double K) {
    require_positive_lambda(lambda);
    const double x = K / lambda;
    if (x < -1.0)
        throw numeric_error("ratio_power: lambda + K must be >= 0");
    if (std::abs(x) < kPowerCutoff)
        return std::exp(-1.0 + 0.5 * x - x * x / 3.0);
    if (x == -1.0) return 0.0;
    // (lambda/(lambda+K))^(lambda/K) = exp(-log1p(x)/x)
    return std::exp(-std::log1p(x) / x);
}

double convention_power(double lambda, double K) {
    require_positive_lambda(lambda);
    if (K < 0.0)
        throw std::invalid_argument("convention_power: K must be >= 0");
    return ratio_power(lambda, K);
}

double eps_max_closed_form(double A, double B) {
    if (A < 0.0 || B < 0.0)
        throw std::invalid_argument("eps_max_closed_form: A, B must be >= 0");
    if (A == 0.0) return B;
    if (B > 2.0 * A) return B;
    return A + B * B / (4.0 * A);
}

Branch eps_max_branch(double A, double B) {
    if (B == 2.0 * A) return Branch::Boundary;
    return B > 2.0 * A ? Branch::LargeEigenvalue : Branch::EpsInterior;
}

// ---------------------------------------------------------------------------

double dirichlet_lower_bound(const GeometryParams& g, double lambda) {
    g.validate();
    require_positive_lambda(lambda);
    const double Kp = std::max(g.K, 0.0);
    return std::sqrt(lambda * lambda / (g.n * (lambda + Kp)) *
                     ratio_power(lambda, Kp));
}

double dirichlet_lower_bound_weak(const GeometryParams& g, double lambda) {
    g.validate();
    require_positive_lambda(lambda);
    const double Kp = std::max(g.K, 0.0);
    return lambda / std::sqrt(g.n * kE * (lambda + Kp));
}

std::vector<double> default_t_grid(const GeometryParams& g, double lambda) {
    const double Kp = std::max(g.K, 0.0);
    const double lo = 0.01 / (lambda + Kp);
    const double hi = 100.0 / lambda;
    std::vector<double> grid(256);
    const double ratio = std::log(hi / lo) / 255.0;
    for (int i = 0; i < 256; ++i) grid[i] = lo * std::exp(ratio * i);
    return grid;
}

SupTResult dirichlet_lower_bound_sup_t(const GeometryParams& g, double lambda,
                                       const std::vector<double>& t_grid) {
    g.validate();
    require_positive_lambda(lambda);
    if (t_grid.empty())
        throw std::invalid_argument("dirichlet_lower_bound_sup_t: empty t grid");
    const double K = g.K;
    auto objective = [&](double t) {
        // lambda^2 (e^{Kt}-1)/(n K) * e^{-(lambda+K)^+ t}, with (e^{Kt}-1)/K -> t
        const double growth = (K == 0.0 || std::abs(K * t) < 1e-14)
                                  ? t
                                  : std::expm1(K * t) / K;
        const double decay = std::max(lambda + K, 0.0);
        return lambda * lambda * growth * std::exp(-decay * t) / g.n;
    };
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0))
            throw std::invalid_argument("dirichlet_lower_bound_sup_t: t must be > 0");
        const double v = objective(t_grid[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double t_star = t_grid[best];
    if (t_grid.size() >= 2) {
        const double lo = best > 0 ? t_grid[best - 1] : 0.5 * t_grid[best];
        const double hi = best + 1 < t_grid.size() ? t_grid[best + 1]
                                                   : 2.0 * t_grid[best];
        // golden section tracking the maximiser
        const double invphi = 0.6180339887498948482;
        double a = lo, b = hi;
        for (int i = 0; i < 120 && (b - a) > 1e-16 * b; ++i) {
            const double x1 = b - invphi * (b - a);
            const double x2 = a + invphi * (b - a);
            if (objective(x1) < objective(x2))
                a = x1;
            else
                b = x2;
        }
        t_star = 0.5 * (a + b);
        best_val = std::max(best_val, objective(t_star));
    }
    return {best_val, t_star};
}

// ---------------------------------------------------------------------------

namespace {

// exp(-alpha^2 / (2 mu)), with the mu -> 0 limits.
double gauss_factor(double alpha, double mu) {
    if (mu <= 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    return std::exp(-alpha * alpha / (2.0 * mu));
}

double min_term(double alpha, double mu) {
    if (mu <= 0.0) return std::abs(alpha);
    return std::min(std::abs(alpha),
                    std::sqrt(2.0) * alpha * alpha / std::sqrt(kPi * mu));
}

} // namespace

std::vector<UpperVariant> admissible_variants(double alpha) {
    std::vector<UpperVariant> out;
    for (UpperVariant v :
         {UpperVariant::A, UpperVariant::APrime, UpperVariant::SimplifiedPos,
          UpperVariant::AStar, UpperVariant::AHat, UpperVariant::SimplifiedNeg})
        if (variant_admissible(v, alpha)) out.push_back(v);
    return out;
}

BoundSet dirichlet_upper_bound(const GeometryParams& g, double lambda,
                               UpperVariant variant) {
    g.validate();
    require_positive_lambda(lambda);
    if (!variant_admissible(variant, g.alpha))
        throw std::invalid_argument("dirichlet_upper_bound: variant " +
                                    to_string(variant) +
                                    " not admissible for alpha of this sign");
    const double mu = lambda + g.K_V;
    if (mu < 0.0)
        throw numeric_error("dirichlet_upper_bound: lambda + K_V < 0");
    const double B = std::sqrt(mu);
    const double alpha = g.alpha;

    BoundSet bs;
    bs.variant = variant;
    bs.intermediates["B"] = B;
    const double root = std::sqrt(2.0 * mu / kPi) * gauss_factor(alpha, mu);

    switch (variant) {
        case UpperVariant::A: {
            const double A = alpha + root + min_term(alpha, mu);
            bs.intermediates["A"] = A;
            bs.upper = kSqrtE * eps_max_closed_form(A, B);
            bs.branch = eps_max_branch(A, B);
            break;
        }
        case UpperVariant::APrime: {
            const double A = 2.0 * alpha + root;
            bs.intermediates["A_prime"] = A;
            bs.upper = kSqrtE * eps_max_closed_form(A, B);
            bs.branch = eps_max_branch(A, B);
            break;
        }
        case UpperVariant::AStar: {
            const double A = root;
            bs.intermediates["A_star"] = A;
            bs.upper = kSqrtE * eps_max_closed_form(A, B);
            bs.branch = eps_max_branch(A, B);
            break;
        }
        case UpperVariant::AHat: {
            // distinct e / sqrt(e) weights; uses lambda, not mu, inside A-hat
            const double A = alpha + std::sqrt(2.0 * lambda / kPi) *
                                         gauss_factor(alpha, lambda) +
                             min_term(alpha, lambda);
            bs.intermediates["A_hat"] = A;
            bs.upper = eps_max_closed_form(kE * A, kSqrtE * B);
            bs.branch = eps_max_branch(kE * A, kSqrtE * B);
            break;
        }
        case UpperVariant::SimplifiedPos: {
            const double A = (2.0 * alpha + std::sqrt(2.0 * mu)) / std::sqrt(kPi);
            bs.intermediates["A"] = A;
            bs.upper = A > 0.0 ? kSqrtE * (A + mu / (4.0 * A)) : kSqrtE * B;
            bs.branch = Branch::EpsInterior;
            break;
        }
        case UpperVariant::SimplifiedNeg: {
            bs.upper = kSqrtE * B *
                       (std::sqrt(2.0 / kPi) + 0.25 * std::sqrt(kPi / 2.0));
            bs.branch = Branch::EpsInterior;
            break;
        }
    }
    bs.lower = dirichlet_lower_bound(g, lambda);
    return bs;
}

BoundSet dirichlet_upper_bound_best(const GeometryParams& g, double lambda) {
    BoundSet best;
    bool first = true;
    for (UpperVariant v : admissible_variants(g.alpha)) {
        BoundSet bs = dirichlet_upper_bound(g, lambda, v);
        if (first || bs.upper < best.upper) {
            best = bs;
            first = false;
        }
    }
    return best;
}

std::pair<double, double> intro_c1_c2(const GeometryParams& g, double lambda1) {
    g.validate();
    require_positive_lambda(lambda1);
    const double K = std::max(g.K, 0.0);
    const double mu = lambda1 + K;
    const double c1 = std::sqrt(lambda1) / std::sqrt(g.d * kE * mu);
    const double a0p = std::max(g.alpha, 0.0);
    const double B = std::sqrt(mu);
    const double A = 2.0 * a0p + std::sqrt(2.0 * mu / kPi);
    double c2;
    if (B > 2.0 * A) {
        c2 = std::sqrt(kE * mu) / std::sqrt(lambda1);
    } else {
        c2 = kSqrtE / std::sqrt(lambda1) * (A + mu / (4.0 * A));
    }
    return {c1, c2};
}

// ---------------------------------------------------------------------------

double psi_gradient_bound_f(double alpha, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("psi_gradient_bound_f: t must be > 0");
    const double a = std::abs(alpha);
    // |alpha| sqrt(2t/pi) int_0^{|alpha|} e^{-s^2 t/2} ds = |alpha| erf(|alpha| sqrt(t/2))
    return std::sqrt(2.0 / (kPi * t)) * std::exp(-0.5 * alpha * alpha * t) +
           alpha + a * std::erf(a * std::sqrt(0.5 * t));
}

double psi_gradient_cap_min(double alpha, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
    return alpha +
           std::sqrt(2.0 / (kPi * t)) * std::exp(-0.5 * alpha * alpha * t) +
           std::min(std::abs(alpha),
                    alpha * alpha * std::sqrt(2.0 * t / kPi));
}

double psi_gradient_cap_quadratic(double alpha, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
    return std::sqrt(2.0 / (kPi * t)) + alpha +
           std::sqrt(t / (2.0 * kPi)) * alpha * alpha;
}

// ---------------------------------------------------------------------------

double neumann_upper_bound(double K_or_Kf, double lambda) {
    require_positive_lambda(lambda);
    const double mu = lambda + K_or_Kf;
    if (mu < 0.0)
        throw numeric_error("neumann_upper_bound: lambda + K < 0 (inconsistent inputs)");
    if (mu <= 1e-12 * lambda)
        return std::sqrt(2.0 * lambda / kPi); // limit as lambda + K -> 0
    // (1 + K/lambda)^(lambda/K) = 1 / ratio_power(lambda, K)
    return std::sqrt(2.0 * mu / (kPi * ratio_power(lambda, K_or_Kf)));
}

double neumann_upper_bound_weak(double K_or_Kf, double lambda) {
    require_positive_lambda(lambda);
    return std::sqrt(2.0 * kE * (lambda + std::max(K_or_Kf, 0.0)) / kPi);
}

double neumann_lower_bound(const GeometryParams& g, double lambda) {
    g.validate();
    require_positive_lambda(lambda);
    const double mu = lambda + g.K;
    if (mu < 0.0)
        throw numeric_error("neumann_lower_bound: lambda + K < 0");
    if (mu == 0.0) return 0.0;
    return std::sqrt(lambda * lambda / (g.n * mu) * ratio_power(lambda, g.K));
}

double neumann_lower_bound_weak(const GeometryParams& g, double lambda) {
    g.validate();
    require_positive_lambda(lambda);
    const double Kp = std::max(g.K, 0.0);
    return lambda / std::sqrt(g.n * kE * (lambda + Kp));
}

// ---------------------------------------------------------------------------

double compute_c_eps_f(const ReferenceFunction& rf, double eps, double K,
                       double K_V, CEpsMode mode) {
    rf.validate();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("compute_c_eps_f: eps must be in (0,1)");
    const double const_part =
        mode == CEpsMode::ConstantK ? K : eps * K + (1.0 - eps) * K_V;
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rf.samples.size(); ++i) {
        const double v = 4.0 * eps * rf.log_grad_sq[i] / (1.0 - eps) +
                         const_part - 2.0 * rf.l_log_f[i];
        sup = std::max(sup, v);
    }
    return sup;
}

double compute_K_f(const ReferenceFunction& rf, double K_V) {
    rf.validate();
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rf.samples.size(); ++i)
        sup = std::max(sup, 2.0 * rf.log_grad_sq[i] + K_V - rf.l_log_f[i]);
    return sup;
}

namespace {

// Reference-function objective at eps, extended continuously to eps = 1 (where
// c_eps blows up for non-constant f and the value tends to 0).
double reference_objective(const ReferenceFunction& rf, const GeometryParams& g,
                       double lambda, double K, double K_V, double eps) {
    double c;
    if (eps >= 1.0) {
        if (!rf.is_constant_one()) return 0.0;
        c = K;
        double sup_l = 0.0;
        for (double l : rf.l_log_f) sup_l = std::max(sup_l, -2.0 * l);
        c += sup_l;
    } else {
        c = compute_c_eps_f(rf, eps, K, K_V, CEpsMode::SplitK);
    }
    if (lambda + c < 0.0)
        throw numeric_error("reference_function_lower_bound: lambda + c_eps(f) < 0");
    if (lambda + c == 0.0) return 0.0;
    const double e = std::min(eps, 1.0);
    return std::sqrt(e * lambda * lambda / (g.n * (lambda + c)) *
                     ratio_power(lambda, c)) /
           rf.sup_norm;
}

} // namespace

double reference_function_lower_bound(const ReferenceFunction& rf, const GeometryParams& g,
                         double lambda, const std::vector<double>& eps_grid) {
    g.validate();
    require_positive_lambda(lambda);
    rf.validate();
    if (eps_grid.empty())
        throw std::invalid_argument("reference_function_lower_bound: empty eps grid");
    auto obj = [&](double e) {
        return reference_objective(rf, g, lambda, g.K, g.K_V, e);
    };
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double e = eps_grid[i];
        if (!(e > 0.0 && e <= 1.0))
            throw std::invalid_argument("reference_function_lower_bound: eps must be in (0,1]");
        const double v = obj(e);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (eps_grid.size() >= 3 && best > 0 && best + 1 < eps_grid.size())
        best_val = std::max(
            best_val, golden_section_max(obj, eps_grid[best - 1],
                                         eps_grid[best + 1]));
    return best_val;
}

double reference_function_lower_bound(const ReferenceFunction& rf, const GeometryParams& g,
                         double lambda) {
    std::vector<double> grid(1000);
    for (int i = 0; i < 999; ++i) grid[i] = (i + 1) / 1000.0;
    grid[999] = 1.0; // closure point; the objective extends continuously
    return reference_function_lower_bound(rf, g, lambda, grid);
}

} // namespace eigengrad
