#pragma once

#include "eigengrad/domains.hpp"

#include <vector>

namespace eigengrad {

enum class BoundaryCondition { Dirichlet, Neumann, Closed };

/// One eigenpair of -L on a model domain, sup-normalised. `phi` and `dphi`
/// are sampled on the domain's closure grid; sup norms are extracted with
/// quadratic refinement around the grid argmax so they carry no O(h) bias
/// from grid misalignment of the extremum.
struct EigenPair {
    double lambda = 0.0;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    std::vector<double> phi;
    std::vector<double> dphi;
    double norm_phi = 1.0;           ///< = 1 after normalisation
    double norm_grad = 0.0;          ///< sup of |grad phi|
    double norm_grad_boundary = 0.0; ///< sup of |grad phi| over the boundary
};

/// Lowest m eigenpairs of -(Delta + V' d/dx) on an interval domain with the
/// given boundary condition. The operator is discretised in symmetrised
/// form (it is self-adjoint in e^V dx), eigenvalues are extracted by Sturm
/// bisection and eigenvectors by inverse iteration; second-order accurate.
/// The Neumann list excludes the constant lambda = 0 mode.
/// Requires spec.kind == Interval and m <= grid size / 4.
std::vector<EigenPair> solve_interval(const DomainSpec& spec,
                                      BoundaryCondition bc, int m);

/// Lowest m radial Dirichlet eigenpairs of the ball: phi'' + ((d-1)/r) phi'
/// = -lambda phi with regularity at r = 0 (reflecting ghost stencil) and
/// phi(R) = 0. Requires spec.kind == Ball.
std::vector<EigenPair> solve_ball_radial(const DomainSpec& spec, int m);

/// Closed-form eigenpairs of the circle, lambda_k = (2 pi k / L)^2 with
/// sine eigenfunctions (one representative per eigenvalue).
std::vector<EigenPair> circle_modes(const DomainSpec& spec, int m);

/// |grad phi|_inf / |phi|_inf.
double gradient_ratio(const EigenPair& ep);

/// Max over boundary points of the one-sided derivative of phi; equals the
/// normal-derivative magnitude there (phi vanishes on the boundary in the
/// Dirichlet case). Throws std::invalid_argument for empty-boundary domains.
double boundary_gradient(const EigenPair& ep, const DomainSpec& spec);

/// Weighted L^2 inner product of the discrete eigenfunctions (weight e^V dx
/// on intervals, r^{d-1} dr on the ball), trapezoidal masses.
double weighted_inner_product(const DomainSpec& spec,
                              const std::vector<double>& u,
                              const std::vector<double>& v);

/// Spectral expansion of the survival function of the diffusion generated
/// by L/2 and killed at the boundary:
///   psi(t, x) = sum_k a_k e^{-lambda_k t / 2} phi_k(x),
/// a_k = <1, phi_k>_w / <phi_k, phi_k>_w over the supplied Dirichlet modes.
double survival_series(const std::vector<EigenPair>& modes,
                       const DomainSpec& spec, double t, double x);

/// Normal derivative of the series at the boundary point nearest x = 0
/// (interval) or r = R (ball).
double survival_series_boundary_gradient(const std::vector<EigenPair>& modes,
                                         const DomainSpec& spec, double t);

/// Linear interpolation of grid samples at x (grid assumed uniform).
double interp_grid(const std::vector<double>& grid,
                   const std::vector<double>& values, double x);

} // namespace eigengrad
