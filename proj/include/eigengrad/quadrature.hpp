#pragma once

#include <functional>

namespace eigengrad::quad {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
///
/// Panels are bisected until the local error estimate |K15 - G7| falls
/// under the tolerance share of the panel. Handles integrable endpoint
/// behaviour by deep bisection (Kronrod nodes never touch the endpoints).
/// Throws numeric_error if the panel budget is exhausted before the
/// requested tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

/// Integral of f over (0, inf) via the substitution r = (u/(1-u))^2,
/// which clusters nodes quadratically toward both ends.
double integrate_zero_to_inf(const std::function<double(double)>& f,
                             double abs_tol = 1e-12);

} // namespace eigengrad::quad
