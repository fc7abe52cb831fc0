#include "eigengrad/mc.hpp"

#include "eigengrad/errors.hpp"
#include "eigengrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eigengrad {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct AffineFit {
    double intercept;
    double intercept_sigma;
};

// Weighted least squares for s = a + b*eps; sigmas empty means unit weights.
AffineFit affine_extrapolate(const std::vector<double>& eps,
                             const std::vector<double>& s,
                             const std::vector<double>& sigma) {
    double S = 0, Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
        S += w;
        Sx += w * eps[i];
        Sxx += w * eps[i] * eps[i];
        Sy += w * s[i];
        Sxy += w * eps[i] * s[i];
    }
    const double det = S * Sxx - Sx * Sx;
    if (det == 0.0) throw numeric_error("affine_extrapolate: degenerate design");
    const double a = (Sxx * Sy - Sx * Sxy) / det;
    const double var_a = sigma.empty() ? 0.0 : Sxx / det;
    return {a, std::sqrt(var_a)};
}

std::vector<double> three_smallest(std::vector<double> eps_list) {
    if (eps_list.size() < 3)
        throw std::invalid_argument("fpt_small_eps_slope: need at least 3 eps values");
    std::sort(eps_list.begin(), eps_list.end());
    if (!(eps_list.front() > 0.0))
        throw std::invalid_argument("fpt_small_eps_slope: eps must be > 0");
    if (eps_list.back() < 10.0 * eps_list.front() * (1.0 - 1e-9))
        throw std::invalid_argument("fpt_small_eps_slope: eps list must span a decade");
    return {eps_list[0], eps_list[1], eps_list[2]};
}

} // namespace

double fpt_probability_exact(double alpha, double eps, double t) {
    if (!(eps > 0.0) || !(t > 0.0))
        throw std::invalid_argument("fpt_probability_exact: eps and t must be > 0");
    // P = e^{-alpha eps} int_0^{2t/eps^2} e^{-1/r} / sqrt(pi r^3)
    //       e^{-alpha^2 eps^2 r/4} dr    (r = 2s/eps^2)
    const double upper = 2.0 * t / (eps * eps);
    const double decay = 0.25 * alpha * alpha * eps * eps;
    auto integrand = [decay](double r) {
        if (r <= 0.0) return 0.0;
        const double z = 1.0 / r + decay * r;
        if (z > 700.0) return 0.0;
        return std::exp(-z) / std::sqrt(kPi * r * r * r);
    };
    const double integral = quad::integrate(integrand, 0.0, upper, 1e-13, 1e-12);
    const double p = std::exp(-alpha * eps) * integral;
    return std::min(1.0, std::max(0.0, p));
}

double fpt_quadrature_identity() {
    return quad::integrate_zero_to_inf(
        [](double r) {
            if (r <= 0.0) return 0.0;
            if (1.0 / r > 700.0) return 0.0;
            return std::exp(-1.0 / r) / std::sqrt(r * r * r);
        },
        1e-13);
}

SlopeResult fpt_small_eps_slope(double alpha, double t,
                                const std::vector<double>& eps_list) {
    if (!(t > 0.0)) throw std::invalid_argument("fpt_small_eps_slope: t must be > 0");
    const std::vector<double> eps = three_smallest(eps_list);
    std::vector<double> s(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i)
        s[i] = (1.0 - fpt_probability_exact(alpha, eps[i], t)) / eps[i];
    const AffineFit fit = affine_extrapolate(eps, s, {});
    return {fit.intercept, 0.0};
}

SlopeResult fpt_small_eps_slope_mc(double alpha, double t,
                                   const std::vector<double>& eps_list,
                                   const MCConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("fpt_small_eps_slope_mc: t must be > 0");
    const std::vector<double> eps = three_smallest(eps_list);
    std::vector<double> s(eps.size()), sigma(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        MCConfig run = cfg;
        run.seed = cfg.seed + 0x9E3779B97F4A7C15ull * (i + 1);
        const FptResult r = simulate_fpt(alpha, eps[i], t, run);
        s[i] = (1.0 - r.estimate) / eps[i];
        sigma[i] = r.std_error / eps[i];
    }
    const AffineFit fit = affine_extrapolate(eps, s, sigma);
    return {fit.intercept, fit.intercept_sigma};
}

} // namespace eigengrad
