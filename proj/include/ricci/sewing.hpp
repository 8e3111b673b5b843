#pragma once

#include "ricci/core.hpp"
#include "ricci/model.hpp"

namespace ricci {

/// Smooth bump profile: phi ≡ 1 on [0, delta], phi ≡ 0 on [2 delta, ∞),
/// sup |phi'| <= 2/delta. Built from the e^{-1/s} smoothstep and verified
/// by dense sampling at construction time.
struct BumpProfile {
    double delta = 0.0;
    std::function<double(double)> phi;
    std::function<double(double)> deriv;
};

BumpProfile bump(double delta);

struct GeodesicSample {
    double t;  // arc length under the integrating metric
    Vec point;
    Vec velocity;
};

struct GeodesicPath {
    Vec start;
    Vec initial_velocity;
    std::vector<GeodesicSample> samples;

    const GeodesicSample& end() const { return samples.back(); }
};

// Fixed-step 4th-order integration of the geodesic equation over parameter
// [0, t_max]. Default resolution: step <= 1e-3 * t_max.
GeodesicPath geodesic_exp(const MetricField& g, const Vec& p, const Vec& v,
                          double t_max, int steps = 1000);

/// exp_p(v) together with its differential, from the variational equations
/// integrated alongside the geodesic.
struct ExpResult {
    Vec point;
    Mat jacobian;  // d exp_p at v, chart components
};

ExpResult exp_with_jacobian(const MetricField& g, const Vec& p, const Vec& v,
                            int steps = 64);

// Newton-type shooting: v with exp_p(v) within tol of q.
Vec exp_inverse(const MetricField& g, const Vec& p, const Vec& q,
                double tol = 1e-10, int max_iter = 50, int steps = 64);

// Chart basis that is g(p)-orthonormal (inverse transpose Cholesky factor);
// the fixed identification of T_pM with Euclidean R^n used by all
// normal-coordinate constructions here.
Mat orthonormal_chart_basis(const MetricField& g, const Vec& p);

// g written in normal coordinates centered at p: the pullback of g under
// v -> exp_p(B v) with B = orthonormal_chart_basis. Equals the identity at
// v = 0 and satisfies the radial Gauss-Lemma property.
MetricField normal_rep(const MetricField& g, const Vec& p, int steps = 64);

// The sewing candidate g*: the model metric transferred to the chart of g
// through normal coordinates on both sides, so that g*(p) = g(p) exactly
// and radial pairings agree with g along g-geodesics from p.
MetricField pullback_model(const MetricField& g, const Vec& p,
                           const MetricField& model, int steps = 64);
MetricField pullback_model(const MetricField& g, const Vec& p,
                           const ModelSpec& spec, int steps = 64);

// Max over sampled rays, radii, and coordinate-orthonormal vectors of
// |(g - gstar)(γ', w)|.
double radial_compatibility_check(const MetricField& g, const MetricField& gstar,
                                  const Vec& p, int n_rays, int n_radii,
                                  double radius);

// Blended metric (1 - phi) g + phi g*, with phi driven by dist_g(p, ·)
// computed through exp_inverse. Throws HypothesisViolated when the radial
// compatibility residual exceeds `compat_tol`.
MetricField sew(const MetricField& g, const MetricField& gstar, const Vec& p,
                double delta, double compat_tol = 1e-4);

struct C1Distance {
    double c0 = 0.0;
    double c1 = 0.0;
};

// Sampled C^0/C^1 distance between two metrics over a ball, measured in
// g_ref-orthonormal frames on a deterministic direction x radius grid.
C1Distance c1_distance_estimate(const MetricField& g_ref, const MetricField& g1,
                                const MetricField& g2, const Vec& center,
                                double radius, int n_dirs, int n_radii,
                                double fd_h);

// Sampled sup over the ball of |(g - gstar)(U, V)| / t^2 and its first
// finite-difference derivative; the empirical stand-in for the bound
// constant of the t^2-factorization tensor.
double estimate_r_constant(const MetricField& g, const MetricField& gstar,
                           const Vec& p, double radius, int n_dirs, int n_radii);

/// delta, sampled distances, bound values, and the conformance verdict.
struct SewReport {
    double delta = 0.0;
    double c0_sample = 0.0;
    double c1_sample = 0.0;
    double c_est = 0.0;
    double bound_c0 = 0.0;  // 4 delta^2 C
    double bound_c1 = 0.0;  // 12 delta C + 4 delta^2 C
    bool pass = false;
};

struct SewParams {
    int n_dirs = 12;
    int n_radii = 6;
    int steps = 64;
    double compat_tol = 1e-4;
};

// Runs the full pipeline for one delta: blend, estimate C, sample the
// C^0/C^1 distance over the 2 delta ball, and check conformance with 5%
// slack.
SewReport sew_report(const MetricField& g, const MetricField& gstar,
                     const Vec& p, double delta, const SewParams& params = {});

/// Radial Taylor comparison of g and a model metric around p.
struct TaylorReport {
    std::vector<double> ts;
    std::vector<double> gaps;             // (g - g*)(J_i, J_j) raw values
    std::vector<double> normalized_gaps;  // with J normalized under g
    double t4_coefficient_est = 0.0;
    double curvature_prediction = 0.0;    // -(1/3)(R_g - R_g*)(J_i',∂_t,∂_t,J_j')
};

// Rotational-field pair in normal coordinates: J = x^b ∂_a - x^a ∂_b for
// the plane (a, b). The gap is evaluated along the radial geodesic in
// direction `ray` at radii t0 / 2^l, and the t^4 coefficient recovered by
// Richardson extrapolation.
TaylorReport jacobi_taylor_check(const MetricField& g, const Vec& p,
                                 const MetricField& model, const Vec& ray,
                                 std::pair<int, int> plane_i,
                                 std::pair<int, int> plane_j, double t0 = 0.1,
                                 int levels = 4, int steps = 64);

}  // namespace ricci
