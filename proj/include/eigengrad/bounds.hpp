#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eigengrad {

/// Geometric constants feeding the two-sided gradient-ratio bounds.
///
/// Sign conventions: K bounds the curvature-dimension condition from below
/// (CD(-K, n)); K_V bounds the Bakry-Emery tensor (Ric - Hess_V >= -K_V);
/// theta bounds the boundary mean curvature (H >= -theta); delta bounds the
/// second fundamental form (II >= -delta); alpha is an upper bound for
/// (1/2) L rho applied to the distance-to-boundary function, away from the
/// cut locus. alpha < 0 is admissible (e.g. balls).
struct GeometryParams {
    int d = 1;          ///< intrinsic dimension, >= 1
    double n = 1.0;     ///< effective dimension in CD(-K, n), >= d
    double K = 0.0;     ///< CD lower-bound constant
    double K_V = 0.0;   ///< Bakry-Emery lower-bound constant
    double theta = 0.0; ///< mean-curvature constant
    double delta = 0.0; ///< second-fundamental-form constant
    double alpha = 0.0; ///< bound on (1/2) L rho_boundary

    /// Throws std::invalid_argument unless n >= d >= 1.
    void validate() const;
};

/// alpha_0 = (1/2) max(theta, sqrt((d-1) K0)); requires K0, theta >= 0.
double alpha0_from_boundary_constants(double theta, double K0, int d);

/// Drifted variant: (1/2) (max(theta, sqrt((d-1) K0)) + |grad V|_inf).
double alpha_from_boundary_constants(double theta, double K0, int d,
                                     double grad_v_inf);

/// Which piecewise case of the epsilon-maximisation fired.
enum class Branch {
    LargeEigenvalue, ///< sqrt(lambda + K_V) dominates: bound = sqrt(e (lambda+K_V))
    EpsInterior,     ///< interior maximiser: bound = sqrt(e) (A + (lambda+K_V)/(4A))
    Boundary         ///< tie B = 2A; both expressions coincide
};

/// Upper-bound variants. A, APrime and SimplifiedPos require alpha >= 0;
/// AStar, AHat and SimplifiedNeg require alpha <= 0. All are admissible at
/// alpha = 0.
enum class UpperVariant { A, APrime, AStar, AHat, SimplifiedPos, SimplifiedNeg };

std::string to_string(UpperVariant v);
std::string to_string(Branch b);
std::optional<UpperVariant> upper_variant_from_string(const std::string& s);
bool variant_admissible(UpperVariant v, double alpha);

/// Lower and upper gradient-ratio bounds for one eigenvalue, with the branch
/// taken and the named constants that were actually used.
struct BoundSet {
    double lower = 0.0;
    double upper = 0.0;
    UpperVariant variant = UpperVariant::A;
    Branch branch = Branch::EpsInterior;
    std::map<std::string, double> intermediates; ///< "A", "A_prime", "A_star", "A_hat", "B"
};

/// A reference function f >= 1 sampled on a domain grid, together with
/// |grad log f|^2 and (L log f) samples. inf f = 1 is required (the class
/// of admissible reference functions is normalised that way).
struct ReferenceFunction {
    std::vector<double> samples;
    std::vector<double> log_grad_sq;
    std::vector<double> l_log_f;
    double sup_norm = 1.0;

    void validate() const;
    bool is_constant_one() const;
};

// ---------------------------------------------------------------------------
// Scalar building blocks
// ---------------------------------------------------------------------------

/// (lambda/(lambda+K))^(lambda/K) for K >= 0, with the continuous limit 1/e
/// at K = 0. For |K|/lambda below 1e-8 the series form
/// exp(-1 + K/(2 lambda) - K^2/(3 lambda^2)) is used, so the function is
/// continuous through K = 0. Rejects lambda <= 0 and K < 0.
double convention_power(double lambda, double K);

/// Generalisation used internally and by the Neumann bounds:
/// (lambda/(lambda+K))^(lambda/K) for any K > -lambda (K < 0 admitted),
/// same small-K guard. Tends to 0 as K decreases to -lambda.
double ratio_power(double lambda, double K);

/// max over eps in [0,1] of eps*A + sqrt(1-eps)*B, in closed form:
/// B if B > 2A, else A + B^2/(4A) (B when A = 0). Rejects negative inputs.
double eps_max_closed_form(double A, double B);

/// Branch classification for the closed form above (tie reported as Boundary).
Branch eps_max_branch(double A, double B);

// ---------------------------------------------------------------------------
// Dirichlet bounds
// ---------------------------------------------------------------------------

/// Lower bound on |grad phi|_inf / |phi|_inf under CD(-K, n):
/// sqrt( lambda^2 / (n (lambda+K+)) * (lambda/(lambda+K+))^(lambda/K+) ),
/// K+ = max(K, 0).
double dirichlet_lower_bound(const GeometryParams& g, double lambda);

/// Weaker closed form sqrt( lambda^2 / (n e (lambda+K+)) ).
double dirichlet_lower_bound_weak(const GeometryParams& g, double lambda);

struct SupTResult {
    double value;  ///< supremum of the squared-ratio objective
    double t_star; ///< maximiser
};

/// Numerical supremum over t > 0 of lambda^2 (e^{Kt}-1) / (n K e^{(lambda+K)+ t})
/// (the squared-ratio objective), over the given t grid plus golden-section
/// refinement around the best grid point. Agrees with the square of
/// dirichlet_lower_bound when K >= 0; the analytic maximiser is
/// t* = log(1 + K/lambda)/K (t* = 1/lambda at K = 0).
SupTResult dirichlet_lower_bound_sup_t(const GeometryParams& g, double lambda,
                                       const std::vector<double>& t_grid);

/// Default t grid: 256 log-spaced points bracketing the analytic maximiser.
std::vector<double> default_t_grid(const GeometryParams& g, double lambda);

/// Upper bound on the gradient ratio for a Dirichlet eigenvalue lambda.
///
/// For the requested variant the constant A is
///   A        = alpha + sqrt(2 mu / pi) e^{-alpha^2/(2 mu)}
///                    + min(|alpha|, sqrt(2) alpha^2 / sqrt(pi mu))
///   A'       = 2 alpha + sqrt(2 mu / pi) e^{-alpha^2/(2 mu)}
///   A*       = sqrt(2 mu / pi) e^{-alpha^2/(2 mu)}
///   A-hat    = alpha + sqrt(2 lambda / pi) e^{-alpha^2/(2 lambda)}
///                    + min(|alpha|, sqrt(2) alpha^2 / sqrt(pi lambda))
/// with mu = lambda + K_V, and the bound is sqrt(e) * eps-max of (A, sqrt(mu))
/// -- except A-hat, whose bound is the eps-max of (e A-hat, sqrt(e mu)), and
/// the two simplified variants, which always apply the interior expression:
///   SimplifiedPos: A'' = (2 alpha + sqrt(2 mu)) / sqrt(pi), sqrt(e)(A'' + mu/(4A''))
///   SimplifiedNeg: sqrt(e mu) (sqrt(2/pi) + sqrt(pi/2)/4).
///
/// Throws std::invalid_argument for a variant/sign mismatch and numeric_error
/// when lambda + K_V < 0 (inconsistent inputs). The returned BoundSet carries
/// dirichlet_lower_bound in .lower so the pair is a ready-made sandwich.
BoundSet dirichlet_upper_bound(const GeometryParams& g, double lambda,
                               UpperVariant variant);

/// All variants admissible for g.alpha.
std::vector<UpperVariant> admissible_variants(double alpha);

/// Minimum upper bound over all admissible variants.
BoundSet dirichlet_upper_bound_best(const GeometryParams& g, double lambda);

/// Explicit eigenvalue-independent constants (c1, c2) such that
/// c1 sqrt(lambda) |phi|_inf <= |grad phi|_inf <= c2 sqrt(lambda) |phi|_inf
/// for every Dirichlet eigenvalue lambda >= lambda1, evaluated exactly as
/// printed: c1 = sqrt(lambda1 / (d e (lambda1+K))) and c2 built from
/// B = sqrt(lambda1+K), A = 2 alpha0+ + sqrt(2(lambda1+K)/pi) with the
/// indicator on B vs 2A. g.alpha plays the role of alpha0.
std::pair<double, double> intro_c1_c2(const GeometryParams& g, double lambda1);

// ---------------------------------------------------------------------------
// Boundary-gradient bound for the survival function
// ---------------------------------------------------------------------------

/// f(alpha) = sqrt(2/(pi t)) e^{-alpha^2 t/2} + alpha
///          + |alpha| sqrt(2t/pi) int_0^{|alpha|} e^{-s^2 t/2} ds,
/// the sharp bound on the boundary gradient of the survival function of the
/// killed diffusion at horizon t. The integral is evaluated in closed form
/// (erf), exact to machine precision; the adaptive-quadrature route is kept
/// in the test suite as an independent oracle. Rejects t <= 0.
double psi_gradient_bound_f(double alpha, double t);

/// Simplified caps dominating f(alpha):
/// cap from the min-form: alpha + sqrt(2/(pi t)) e^{-a^2 t/2} + min(|a|, a^2 sqrt(2t/pi))
double psi_gradient_cap_min(double alpha, double t);
/// quadratic cap: sqrt(2/(pi t)) + alpha + sqrt(t/(2 pi)) alpha^2
double psi_gradient_cap_quadratic(double alpha, double t);

// ---------------------------------------------------------------------------
// Neumann bounds
// ---------------------------------------------------------------------------

/// Upper bound sqrt( 2(lambda+K)/pi * (1 + K/lambda)^(lambda/K) ) with the
/// K -> 0 convention. K may be negative; lambda + K < 0 throws numeric_error
/// (the theory guarantees lambda + K >= 0, so a violation signals bad inputs).
/// For reference-function use the caller multiplies by |f|_inf.
double neumann_upper_bound(double K_or_Kf, double lambda);

/// Weakened form sqrt( 2 e (lambda + K+) / pi ).
double neumann_upper_bound_weak(double K_or_Kf, double lambda);

/// Lower bound sqrt( lambda^2/(n(lambda+K)) * (lambda/(lambda+K))^(lambda/K) ),
/// mirroring dirichlet_lower_bound; negative K admitted while lambda + K >= 0.
double neumann_lower_bound(const GeometryParams& g, double lambda);
double neumann_lower_bound_weak(const GeometryParams& g, double lambda);

// ---------------------------------------------------------------------------
// Reference-function (non-convex boundary) machinery
// ---------------------------------------------------------------------------

enum class CEpsMode {
    ConstantK, ///< 4 eps |grad log f|^2/(1-eps) + K - 2 Delta log f
    SplitK     ///< 4 eps |grad log f|^2/(1-eps) + eps K + (1-eps) K_V - 2 L log f
};

/// Grid supremum of the c_eps(f) expression. Rejects eps outside (0,1).
double compute_c_eps_f(const ReferenceFunction& rf, double eps, double K,
                       double K_V, CEpsMode mode);

/// Grid supremum of 2 |grad log f|^2 + K_V - L log f.
double compute_K_f(const ReferenceFunction& rf, double K_V);

/// Lower bound sup over the eps grid of
/// sqrt( eps lambda^2 / (n (lambda + c_eps(f))) * ratio_power(lambda, c_eps(f)) ) / |f|_inf.
/// Asserts lambda + c_eps(f) >= 0 for every eps used (numeric_error otherwise).
/// Maximisation runs over exactly the supplied grid, with golden-section
/// refinement between the neighbours of the best grid point.
double reference_function_lower_bound(const ReferenceFunction& rf, const GeometryParams& g,
                         double lambda, const std::vector<double>& eps_grid);

/// Default grid: 999 points {0.001, ..., 0.999} plus the eps -> 1 closure
/// point, where the objective extends continuously (for constant f the
/// supremum over (0,1) is attained only in that limit).
double reference_function_lower_bound(const ReferenceFunction& rf, const GeometryParams& g,
                         double lambda);

} // namespace eigengrad
