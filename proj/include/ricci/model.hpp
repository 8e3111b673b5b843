#pragma once

#include <optional>
#include <vector>

#include "ricci/core.hpp"

namespace ricci {

/// Vertices of a regular s-simplex inscribed in the unit sphere of R^s:
/// s+1 unit vectors with pairwise inner products -1/s.
struct SimplexVertices {
    int s = 0;
    std::vector<Vec> verts;
};

SimplexVertices regular_simplex(int s);

// Rotation angle at which the rotated simplex vertices become pairwise
// orthogonal: xi = arctan(sqrt(1/(n-d-1))).
double critical_angle(int n, int d);

// V_i(theta) = cos(theta) V_i(0) - sin(theta) U, with the simplex vertices
// embedded in the orthogonal complement of U inside R^{n-d}.
std::vector<Vec> rotated_vertices(const SimplexVertices& v0, const Vec& u,
                                  double theta);

/// All parameters of a warped-product model metric
/// g = dx^2 + sum_i phi_i(x)^2 dy_i^2 on R^{n-d} x R^d with affine phi_i,
/// built so that the normalized y-coordinate fields form a frame whose
/// sectional curvatures at the origin take exactly two values {-nu, mu}.
struct ModelSpec {
    int n = 0;
    int k = 0;
    int d = 0;                       // floor((n+k)/2)
    double a = 1.0;                  // phi_1(0) = ... = phi_k(0)
    double b = 0.0;                  // value of the remaining phi at 0
    std::optional<double> theta;     // rotation angle (k <= n-3 case only)
    double xi = 0.0;                 // critical angle (k <= n-3 case only)
    Vec U;                           // unit vector in R^{n-d}
    std::vector<Vec> grads;          // d gradient vectors in R^{n-d}
    std::vector<double> base_vals;   // phi_i(0), all positive
    double mu = 0.0;
    double nu = 0.0;

    // Throws BadInput if any structural invariant fails.
    void validate() const;
};

// Constructs the model for ambient dimension n and intermediate index k.
// a defaults to 1. In the k = n-2 case b may be supplied directly (it must
// satisfy a > (k-1) b); otherwise b = a/2. In the k <= n-3 case theta, when
// absent, is found by bisection inside (0, xi) so that
// <U, V_i(theta)>^2 > -(k-1) <V_i(theta), V_j(theta)> holds with margin
// >= 10% of the left side, and the midpoint of the admissible sub-interval
// is used.
ModelSpec build_model(int n, int k, double a = 1.0,
                      std::optional<double> theta = std::nullopt,
                      std::optional<double> b = std::nullopt);

// Affine phi_i(x) = base_vals[i] + <grads[i], x>.
double model_phi(const ModelSpec& spec, int i, const Vec& x);

// The metric field for the spec, with closed-form derivatives and the
// half-space-intersection domain where all phi_i > 0.
MetricField model_metric_field(const ModelSpec& spec);

// Normalized Killing frame K_i = (1/phi_i(0)) ∂/∂y_i at the origin.
Frame model_killing_frame(const ModelSpec& spec);

// sec(K_i, K_j) at the origin: -<grad phi_i, grad phi_j>/(phi_i(0) phi_j(0)).
double closed_form_sec(const ModelSpec& spec, int i, int j);

}  // namespace ricci
