#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ricci/errors.hpp"

namespace ricci {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class DerivScheme { Analytic, FiniteDifference };

// Central-difference step used everywhere a metric is differentiated
// numerically: h = 1e-4 * (1 + |p|).
double fd_step(const Vec& p);

/// A chart-domain metric: evaluation rule point -> SPD matrix, plus an
/// optional closed-form derivative scheme and a validity-domain predicate.
struct MetricField {
    int dim = 0;
    DerivScheme scheme = DerivScheme::FiniteDifference;
    std::function<Mat(const Vec&)> eval;
    // Analytic scheme only: d1(p, a) = ∂_a g, d2(p, a, b) = ∂_a ∂_b g.
    std::function<Mat(const Vec&, int)> d1;
    std::function<Mat(const Vec&, int, int)> d2;
    // Defaults to the whole chart when unset.
    std::function<bool(const Vec&)> in_domain;
    // Multiplier on the finite-difference step; raised for evaluation rules
    // whose own noise floor exceeds f64 round-off (e.g. shooting-based
    // pullbacks).
    double fd_scale = 1.0;

    bool contains(const Vec& p) const { return !in_domain || in_domain(p); }

    // Evaluates g(p) and checks symmetry / positive definiteness.
    Mat value(const Vec& p) const;

    // First and second coordinate derivatives of g, analytic when supplied,
    // otherwise central differences (5-point stencil for ∂_a ∂_a g).
    Mat deriv1(const Vec& p, int a) const;
    Mat deriv2(const Vec& p, int a, int b) const;

    // Tensor-identity tolerance appropriate to the derivative scheme.
    double scheme_tol() const {
        return scheme == DerivScheme::Analytic ? 1e-9 : 1e-4;
    }
};

// Flat Euclidean metric on R^n (analytic scheme, zero derivatives).
MetricField euclidean_metric(int n);

// Conformal constant-curvature chart g = 4/(1 + kappa |x|^2)^2 * delta.
// kappa = 1 is the unit round sphere, kappa = 0 is flat.
MetricField constant_curvature_metric(int n, double kappa);

/// Christoffel symbols and the fully lowered Riemann tensor at one point.
/// Convention: riem(i,j,k,l) = <R(∂_k, ∂_l) ∂_j, ∂_i>, so that
/// sec(u,v) = riem(u,v,u,v) / (|u|^2 |v|^2 - <u,v>^2) and the unit round
/// sphere has riem(i,j,k,l) = g_ik g_jl - g_il g_jk (sec = +1).
struct CurvatureData {
    Vec at;
    int dim = 0;
    std::vector<Mat> gamma;          // gamma[i](j,k) = Γ^i_{jk}
    std::vector<double> riem_flat;   // lowered tensor, size dim^4 (may be empty)

    double riem(int i, int j, int k, int l) const {
        return riem_flat[((static_cast<size_t>(i) * dim + j) * dim + k) * dim + l];
    }
    // Quadrilinear contraction R(a,b,c,d).
    double contract(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const;
};

// Christoffel symbols Γ^i_{jk} = 1/2 g^{il}(∂_j g_lk + ∂_k g_jl - ∂_l g_jk).
CurvatureData christoffel(const MetricField& g, const Vec& p);

// Christoffel symbols plus the lowered Riemann tensor.
CurvatureData riemann(const MetricField& g, const Vec& p);

/// Christoffel symbols together with their coordinate partials, the inputs
/// of both the Riemann tensor and the geodesic variational equations.
struct GammaPartials {
    std::vector<Mat> gamma;                // gamma[i](j,k)
    std::vector<std::vector<Mat>> dgamma;  // dgamma[a][i](j,k) = ∂_a Γ^i_{jk}
};

GammaPartials christoffel_with_partials(const MetricField& g, const Vec& p);

/// Ordered list of tangent vectors at a common base point.
struct Frame {
    Vec base;
    std::vector<Vec> vectors;
    bool orthonormal = false;
};

// Modified Gram-Schmidt with pivoting under g(p). Rejects inputs whose Gram
// matrix has condition number above 1e8. Returns as many orthonormal
// vectors as the input's numerical rank.
Frame orthonormalize(const Mat& gp, const Vec& p, const std::vector<Vec>& raw);

// Checks the Gram matrix of K under g(p) against the identity (tol 1e-10).
bool is_orthonormal(const Mat& gp, const Frame& K, double tol = 1e-10);

/// Curvature of one metric frozen at one point; the cheap query surface the
/// verifier and minimizers loop over.
struct PointCurvature {
    Vec p;
    Mat gp;
    CurvatureData curv;

    static PointCurvature at(const MetricField& g, const Vec& p);

    double inner(const Vec& u, const Vec& v) const { return u.dot(gp * v); }
    double sectional(const Vec& u, const Vec& v) const;
    double ric_k(const Vec& u, const std::vector<Vec>& span_v, int k) const;
};

// sec(u,v) = R(u,v,u,v) / (|u|^2 |v|^2 - <u,v>^2).
double sectional(const MetricField& g, const Vec& p, const Vec& u, const Vec& v);

// Ric_k(u, V) = sum of sec(u, e_i) over an orthonormal basis {e_i} of the
// complement of u in span(V). V must span a (k+1)-dimensional subspace
// containing u.
double ric_k(const MetricField& g, const Vec& p, const Vec& u,
             const std::vector<Vec>& V, int k);

// Restricted Ricci operator on an orthonormal frame K:
// M_ij = sum_l R(K_i, K_l, K_j, K_l); <M u, u> = Ric_{d-1}(u, span K).
Mat restricted_ricci_operator(const MetricField& g, const Vec& p, const Frame& K);
Mat restricted_ricci_operator(const PointCurvature& pc, const Frame& K);

// Restricted curvature operator in the wedge basis {K_i ∧ K_j}, i < j:
// entry((i,j),(l,m)) = R(K_i, K_j, K_l, K_m).
Mat restricted_curvature_operator(const MetricField& g, const Vec& p, const Frame& K);
Mat restricted_curvature_operator(const PointCurvature& pc, const Frame& K);

// Lie derivative of the metric along a vector field, in chart components:
// (L_K g)_ij = K^a ∂_a g_ij + g_aj ∂_i K^a + g_ia ∂_j K^a.
// Field derivatives are central differences.
Mat lie_derivative_metric(const MetricField& g,
                          const std::function<Vec(const Vec&)>& K, const Vec& p);

}  // namespace ricci
