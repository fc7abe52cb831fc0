#pragma once

#include <vector>

namespace eigengrad::special {

/// Standard normal CDF.
double normal_cdf(double x);

/// Bessel functions of the first kind, order 0 and 1, evaluated by the
/// ascending power series. Accurate to ~1e-11 for |x| <= 12, which covers
/// the first three zeros of J0; throws std::invalid_argument beyond that.
double bessel_j0(double x);
double bessel_j1(double x);

/// k-th positive zero of J0 (k = 1..3), found by bisection on the series.
double bessel_j0_zero(int k);

/// int_0^x exp(-s^2 t / 2) ds  in closed form (erf).
double gaussian_integral(double x, double t);

} // namespace eigengrad::special
