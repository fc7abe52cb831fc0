#pragma once

#include "eigengrad/domains.hpp"
#include "eigengrad/eigensolver.hpp"

#include <cstdint>
#include <vector>

namespace eigengrad {

/// Monte-Carlo budget and reproducibility knobs. Estimates are a pure
/// function of (seed, n_paths, dt): each path owns a counter-based RNG
/// stream and per-chunk partial sums are combined in fixed chunk order,
/// so the result is bit-identical for any thread count.
struct MCConfig {
    long n_paths = 1'000'000;
    double dt = 0.0; ///< 0 means horizon/2000; must satisfy dt <= horizon/100
    std::uint64_t seed = 12345;
    bool bridge_correction = true;
    int n_threads = 0; ///< 0 = hardware concurrency
    int n_chunks = 64;

    /// Effective step for a horizon t; throws if dt > t/100.
    double step_for(double t) const;
};

/// Empirical first-passage probability against the exact law.
struct FptResult {
    double estimate = 0.0; ///< P(T <= t) frequency
    double std_error = 0.0; ///< binomial standard error
    double exact = 0.0;     ///< quadrature value of the exact law
    double z_score = 0.0;   ///< (estimate - exact) / std_error
    long n_paths = 0;
};

/// P(t >= T) where T is the first hitting time of 0 by eps + b_s + alpha s,
/// evaluated by adaptive quadrature of the first-passage density after the
/// substitution r = 2s/eps^2 (which removes the essential singularity at
/// s = 0):
///   P = e^{-alpha eps} int_0^{2t/eps^2} e^{-1/r}/sqrt(pi r^3)
///         e^{-alpha^2 eps^2 r / 4} dr.
/// For alpha = 0 this equals 2 Phi(-eps/sqrt(t)). Rejects eps, t <= 0.
double fpt_probability_exact(double alpha, double eps, double t);

/// int_0^inf r^{-3/2} e^{-1/r} dr, numerically; equals Gamma(1/2) = sqrt(pi).
double fpt_quadrature_identity();

/// Euler simulation of Y_s = eps + b_s + alpha s with per-step Brownian
/// bridge crossing test (probability exp(-2 y_k y_{k+1}/dt)) when
/// bridge_correction is on. For this constant-drift barrier problem the
/// bridge-corrected estimator is unbiased at any step size.
FptResult simulate_fpt(double alpha, double eps, double t, const MCConfig& cfg);

struct SlopeResult {
    double slope = 0.0;
    double std_error = 0.0; ///< 0 for the quadrature-backed path
};

/// Limit of (1 - P(t >= T^alpha(eps)))/eps as eps -> 0, extrapolated with
/// the affine model a + b*eps fitted to the three smallest eps values.
/// Converges to psi_gradient_bound_f(alpha, t). eps_list must span at least
/// a decade and hold >= 3 values.
SlopeResult fpt_small_eps_slope(double alpha, double t,
                                const std::vector<double>& eps_list);

/// Same extrapolation driven by simulate_fpt; std_error is propagated
/// through the fit.
SlopeResult fpt_small_eps_slope_mc(double alpha, double t,
                                   const std::vector<double>& eps_list,
                                   const MCConfig& cfg);

struct SurvivalResult {
    double estimate = 0.0;
    double std_error = 0.0;
    /// Dominating first-passage bound P(t < T^alpha(rho(x))) with rho(x)
    /// the starting distance to the boundary and alpha from the domain.
    double fpt_upper_bound = 0.0;
};

/// Survival probability psi(t, x) of the diffusion generated by L/2 started
/// at x (interval coordinate, or radius for the ball) and killed at the
/// boundary; Euler steps with bridge-crossing correction. x must be interior.
SurvivalResult simulate_killed_diffusion(const Domain& dom, double x, double t,
                                         const MCConfig& cfg);

struct MartingaleCheck {
    double t = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double expected = 0.0; ///< phi(x)
    double z_score = 0.0;
};

/// Estimates E[ phi(X_{t ^ tau}) e^{lambda (t ^ tau)/2} ] at each checkpoint;
/// the process is a martingale, so every estimate should equal phi(x).
/// Killed paths contribute zero (phi vanishes on the boundary). Only
/// Dirichlet eigenpairs are accepted.
std::vector<MartingaleCheck> martingale_check(const EigenPair& ep,
                                              const Domain& dom, double x,
                                              const std::vector<double>& t_checkpoints,
                                              const MCConfig& cfg);

struct BoundaryGradientPsiResult {
    double limit = 0.0;     ///< extrapolated psi(t, x_eps)/eps as eps -> 0
    double std_error = 0.0; ///< propagated through the extrapolation
    double bound = 0.0;     ///< psi_gradient_bound_f(alpha, t) for the domain
    std::vector<double> eps_used;
};

/// Boundary gradient of the survival function by a ladder of starting
/// distances: estimates psi(t, x_eps)/eps and extrapolates eps -> 0.
/// The limit should not exceed `bound` beyond Monte-Carlo noise.
BoundaryGradientPsiResult boundary_gradient_psi(const Domain& dom, double t,
                                                const MCConfig& cfg,
                                                std::vector<double> eps_ladder = {});

} // namespace eigengrad
