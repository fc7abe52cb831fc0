#pragma once

#include <functional>
#include <vector>

namespace eigengrad {

enum class DomainKind { Interval, Ball, Circle };

/// A model domain with its computational grid and analytic eigenvalue
/// metadata where available. Intervals carry the drift potential V sampled
/// on the grid (empty vector means V = 0). The ball is represented by its
/// radial coordinate; the circle grid holds one period [0, L).
struct DomainSpec {
    DomainKind kind = DomainKind::Interval;
    double length = 0.0; ///< interval/circle
    double radius = 0.0; ///< ball
    int dim = 1;
    std::vector<double> grid;
    std::vector<double> drift_potential;
    std::vector<double> lambda_dirichlet; ///< analytic list when known
    std::vector<double> lambda_neumann;   ///< analytic list when known

    double spacing() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
    bool has_boundary() const { return kind != DomainKind::Circle; }
};

/// Exact curvature/boundary constants of a model domain. `alpha` is the
/// value to feed the bound formulas (analytic where known, otherwise the
/// grid supremum of (1/2) L rho off the cut locus); `alpha_global` is the
/// coarser drift-based value (1/2)(max(theta, sqrt((d-1)K0)) + |grad V|_inf),
/// exposed alongside since either is admissible.
struct CurvatureData {
    double K0 = 0.0;
    double K_V = 0.0;
    double theta = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double alpha_global = 0.0;
    std::vector<double> cut_locus;
};

struct Domain {
    DomainSpec spec;
    CurvatureData curv;
};

/// Interval [0, L] with optional drift potential V (sampled once on the
/// grid; V must be twice differentiable). Constants:
///   K0 = 0,  K_V = sup V''  (so that Ric - Hess_V = -V'' >= -K_V),
///   alpha = grid sup of (1/2) V'(x) sign(L/2 - x) off the cut locus {L/2}.
/// Throws std::invalid_argument on non-finite V samples.
Domain make_interval(double L, const std::function<double(double)>& V = {},
                     int n_interior = 2048);

/// Closed ball of radius R in dimension d >= 2, radial coordinate.
/// alpha = -(d-1)/(2R) (the sup of (1/2) Delta (R - r) = -(d-1)/(2r) over
/// r in (0, R]); cut locus {0}.
Domain make_ball(int d, double R, int n_interior = 2048);

/// Circle of circumference L: empty boundary, flat, eigenvalues
/// lambda_k = (2 pi k / L)^2.
Domain make_circle(double L, int n_nodes = 2048);

/// Grid supremum of (1/2) L rho_boundary, excluding nodes within one cell
/// of the cut locus. Matches the analytic alpha within O(h) near the
/// boundary for the ball and exactly for the flat interval.
double boundary_alpha_grid_sup(const DomainSpec& spec);

/// CD(-K, n) constant for the drifted interval: sup(V'' + V'^2/(n-1)) for
/// n > 1; for V = 0 any n >= 1 gives 0. Throws when n <= 1 with V != 0.
double cd_constant_for_interval(const Domain& dom, double n);

} // namespace eigengrad
