#pragma once

#include "ricci/core.hpp"

namespace ricci {

/// A coordinate-plane slice through `base`: the submanifold obtained by
/// varying only the listed chart coordinates.
struct Slice {
    Vec base;
    std::vector<int> coords;

    int dim() const { return static_cast<int>(coords.size()); }
};

/// Second fundamental form of a slice at one point, expressed in an
/// orthonormal tangent frame and an orthonormal normal frame:
/// values[alpha](i, j) = <II(T_i, T_j), N_alpha>.
struct SffData {
    Vec at;
    Frame tangent;
    Frame normal;
    std::vector<Mat> values;

    int tangent_dim() const { return static_cast<int>(tangent.vectors.size()); }
    int normal_dim() const { return static_cast<int>(normal.vectors.size()); }

    // II(u, v) in normal-frame components, for u, v given in tangent-frame
    // coefficients.
    Vec apply(const Vec& u, const Vec& v) const;
};

// Orthonormal tangent frame from the slice coordinate directions and an
// orthonormal normal frame completing it, both under g at slice.base.
std::pair<Frame, Frame> slice_frames(const MetricField& g, const Slice& slice);

// II from Christoffel symbols projected to the normal space. Valid because
// the slice is a coordinate plane, so constant-component extensions of
// tangent vectors stay tangent to it.
SffData second_fundamental_form(const MetricField& g, const Slice& slice);

// Numerical dim ker II(u, ·) as a map from the complement of u in the
// tangent space to the normal space. u is given in tangent-frame
// coefficients; singular values below 1e-10 * (sigma_max + 1) count as zero.
int kernel_dimension(const SffData& sff, const Vec& u);

// The induced metric on the slice, as a MetricField in the slice
// coordinates (inherits the parent's derivative scheme).
MetricField induced_metric(const MetricField& g, const Slice& slice);

/// The pair produced by the symmetry-bound argument: a unit u minimizing
/// |II(u, u)|, k orthonormal kernel vectors, and the ambient Ric_k value,
/// which the argument forces to be non-positive.
struct NonPositivePair {
    Vec u;                        // tangent-frame coefficients
    std::vector<Vec> e;           // kernel vectors, tangent-frame coefficients
    double ric_value = 0.0;
    std::vector<double> cross_terms;  // <II(u,u), II(e_i,e_i)>
    double ii_uu_norm2 = 0.0;
    bool f2_certificate = true;   // cross_terms - |II(u,u)|^2 >= -1e-6 at u
};

// Requires dim(slice) > (n+k)/2 and an intrinsically flat slice (checked by
// sampling). Minimizes |II(u,u)|^2 over the unit sphere of the tangent
// space with 32 antipodally-paired multistarts, extracts k kernel vectors,
// and evaluates Ric_k ambiently.
NonPositivePair find_nonpositive_pair(const MetricField& g, const Slice& slice,
                                      int k);

// Gauss equation residual:
// sec_M(u,v) - [intrinsic_sec + |II(u,v)|^2 - <II(u,u), II(v,v)>]
// for orthonormal tangent vectors u, v in tangent-frame coefficients.
double gauss_equation_check(const MetricField& g, const SffData& sff,
                            const Vec& u, const Vec& v, double intrinsic_sec);

}  // namespace ricci
