#include "eigengrad/special.hpp"

#include <cmath>
#include <stdexcept>

namespace eigengrad::special {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Ascending series sum_m (-q)^m / (m! (m+nu)!) * (x/2)^nu with q = x^2/4.
// Alternating with ~6 digits of cancellation at x = 12, fine in double.
double bessel_series(double x, int nu) {
    if (std::abs(x) > 12.0)
        throw std::invalid_argument("bessel_j: series only valid for |x| <= 12");
    const double q = 0.25 * x * x;
    double term = 1.0;
    for (int m = 1; m <= nu; ++m) term *= 0.5 * x / m;
    double sum = term;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<double>(m) * (m + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
    }
    return sum;
}

} // namespace

double bessel_j0(double x) { return bessel_series(x, 0); }
double bessel_j1(double x) { return bessel_series(x, 1); }

double bessel_j0_zero(int k) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("bessel_j0_zero: k must be in 1..3");
    // McMahon initial brackets around (k - 1/4) pi, then bisection.
    const double c = (k - 0.25) * 3.14159265358979323846;
    double lo = c - 0.5, hi = c + 0.5;
    double flo = bessel_j0(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j0(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double gaussian_integral(double x, double t) {
    // int_0^x e^{-s^2 t/2} ds = sqrt(pi/(2t)) erf(x sqrt(t/2))
    const double st = std::sqrt(0.5 * t);
    return std::sqrt(3.14159265358979323846) / (2.0 * st) * std::erf(x * st);
}

} // namespace eigengrad::special
