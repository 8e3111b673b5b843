#include "ricci/model.hpp"

#include <cmath>

namespace ricci {

SimplexVertices regular_simplex(int s) {
    if (s < 1) throw BadDimension("regular_simplex requires s >= 1");
    SimplexVertices out;
    out.s = s;
    // Center the standard basis of R^{s+1} and express it in an orthonormal
    // basis of the sum-zero hyperplane.
    const int m = s + 1;
    Mat C(m, m);
    for (int i = 0; i < m; ++i) {
        C.col(i) = -Vec::Constant(m, 1.0 / m);
        C(i, i) += 1.0;
    }
    Eigen::HouseholderQR<Mat> qr(C.leftCols(s));
    Mat Q = Mat(qr.householderQ()).leftCols(s);
    for (int i = 0; i < m; ++i) {
        Vec v = Q.transpose() * C.col(i);
        out.verts.push_back(v / v.norm());
    }
    return out;
}

double critical_angle(int n, int d) {
    const int s = n - d - 1;
    if (s < 1) throw WrongCase("critical angle undefined; use the k = n-2 construction");
    return std::atan(std::sqrt(1.0 / s));
}

std::vector<Vec> rotated_vertices(const SimplexVertices& v0, const Vec& u,
                                  double theta) {
    if (std::abs(u.norm() - 1.0) > 1e-12) {
        throw BadInput("rotation axis U must be a unit vector");
    }
    const int nd = static_cast<int>(u.size());
    if (nd != v0.s + 1) {
        throw BadInput("U must live in R^{s+1} for an s-simplex");
    }
    // Embed the simplex in the orthogonal complement of U. U is the first
    // standard basis vector by the fixed gauge, so the simplex occupies the
    // remaining coordinates.
    std::vector<Vec> out;
    for (const Vec& v : v0.verts) {
        Vec lifted = Vec::Zero(nd);
        lifted.tail(v0.s) = v;
        out.push_back(std::cos(theta) * lifted - std::sin(theta) * u);
    }
    return out;
}

void ModelSpec::validate() const {
    if (n < 3 || k < 1 || k > n - 2) throw BadInput("invalid (n, k) in ModelSpec");
    if (d != (n + k) / 2) throw BadInput("d must equal floor((n+k)/2)");
    if (static_cast<int>(grads.size()) != d ||
        static_cast<int>(base_vals.size()) != d) {
        throw BadInput("grads and base_vals must have length d");
    }
    for (double v : base_vals) {
        if (!(v > 0.0)) throw BadInput("base_vals must be positive");
    }
    if (std::abs(U.norm() - 1.0) > 1e-12) throw BadInput("U must be a unit vector");
    if (k == n - 2) {
        if (!(a > (k - 1) * b)) throw BadInput("k = n-2 case requires a > (k-1) b");
    } else {
        if (!theta) throw BadInput("k <= n-3 case requires theta");
        if (!(*theta > 0.0 && *theta < xi)) throw BadInput("theta must lie in (0, xi)");
        const double ip_uv = -std::sin(*theta);
        const int s = n - d - 1;
        const double ip_vv =
            -std::cos(*theta) * std::cos(*theta) / s + std::sin(*theta) * std::sin(*theta);
        if (!(ip_uv * ip_uv > -(k - 1) * ip_vv)) {
            throw BadInput("theta fails <U,V_i>^2 > -(k-1)<V_i,V_j>");
        }
    }
    if (!(mu - (k - 1) * nu > 0.0)) throw BadInput("mu - (k-1) nu must be positive");
}

ModelSpec build_model(int n, int k, double a, std::optional<double> theta,
                      std::optional<double> b_in) {
    if (n < 3 || k < 1 || k > n - 2) throw BadIndex("need n >= 3 and 1 <= k <= n-2");
    if (!(a > 0.0)) throw BadInput("a must be positive");
    ModelSpec spec;
    spec.n = n;
    spec.k = k;
    spec.d = (n + k) / 2;
    spec.a = a;
    const int nd = n - spec.d;
    spec.U = Vec::Zero(nd);
    spec.U[0] = 1.0;

    if (k == n - 2) {
        // 1-dimensional normal space: gradients are U (k times) and -U.
        // Default b keeps a > (k-1) b with a factor-2 margin for any k.
        double b = b_in.value_or(k >= 2 ? a / (2.0 * (k - 1)) : a / 2.0);
        if (k >= 2 && !(a > (k - 1) * b)) {
            throw BadInput("k = n-2 case requires a > (k-1) b");
        }
        spec.b = b;
        for (int i = 0; i < k; ++i) {
            spec.grads.push_back(spec.U);
            spec.base_vals.push_back(a);
        }
        spec.grads.push_back(-spec.U);
        spec.base_vals.push_back(b);
        spec.mu = 1.0 / (a * b);
        spec.nu = 1.0 / (a * a);
    } else {
        const int s = nd - 1;
        spec.xi = critical_angle(n, spec.d);
        const double margin = 0.10;
        auto admissible = [&](double th) {
            const double sin2 = std::sin(th) * std::sin(th);
            const double ip_vv = -std::cos(th) * std::cos(th) / s + sin2;
            return (1.0 - margin) * sin2 + (k - 1) * ip_vv;
        };
        double th;
        if (theta) {
            th = *theta;
            if (!(th > 0.0 && th < spec.xi) || admissible(th) < 0.0) {
                throw BadInput("supplied theta is not admissible");
            }
        } else {
            // admissible() is increasing in theta and positive at xi; bisect
            // for the lower edge of the admissible sub-interval, then take
            // its midpoint with xi.
            double lo = 0.0, hi = spec.xi;
            if (admissible(0.0) >= 0.0) {
                hi = 0.0;  // whole interval admissible
            } else {
                bool found = false;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (admissible(mid) < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                        found = true;
                    }
                }
                if (!found) {
                    throw ConstructionFailure("no admissible theta found in (0, xi)");
                }
            }
            th = 0.5 * (hi + spec.xi);
        }
        spec.theta = th;
        const double ip_uv = -std::sin(th);
        const double ip_vv =
            -std::cos(th) * std::cos(th) / s + std::sin(th) * std::sin(th);
        spec.b = a * ip_vv / ip_uv;
        spec.mu = -(ip_uv * ip_uv) / (a * a * ip_vv);
        spec.nu = 1.0 / (a * a);

        SimplexVertices simplex = regular_simplex(s);
        std::vector<Vec> verts = rotated_vertices(simplex, spec.U, th);
        for (int i = 0; i < k; ++i) {
            spec.grads.push_back(spec.U);
            spec.base_vals.push_back(a);
        }
        // d-k of the n-d vertices carry the remaining gradients (d-k equals
        // n-d or n-d-1 depending on the parity of n+k).
        for (int i = 0; i < spec.d - k; ++i) {
            spec.grads.push_back(verts[i]);
            spec.base_vals.push_back(spec.b);
        }
    }
    spec.validate();
    return spec;
}

double model_phi(const ModelSpec& spec, int i, const Vec& x) {
    return spec.base_vals[i] + spec.grads[i].dot(x);
}

MetricField model_metric_field(const ModelSpec& spec) {
    spec.validate();
    MetricField g;
    const int n = spec.n;
    const int nd = n - spec.d;
    g.dim = n;
    g.scheme = DerivScheme::Analytic;
    g.eval = [spec, n, nd](const Vec& p) {
        Mat m = Mat::Identity(n, n);
        const Vec x = p.head(nd);
        for (int i = 0; i < spec.d; ++i) {
            const double phi = model_phi(spec, i, x);
            m(nd + i, nd + i) = phi * phi;
        }
        return m;
    };
    g.d1 = [spec, n, nd](const Vec& p, int a) {
        Mat m = Mat::Zero(n, n);
        if (a >= nd) return m;
        const Vec x = p.head(nd);
        for (int i = 0; i < spec.d; ++i) {
            m(nd + i, nd + i) = 2.0 * model_phi(spec, i, x) * spec.grads[i][a];
        }
        return m;
    };
    g.d2 = [spec, n, nd](const Vec&, int a, int b) {
        Mat m = Mat::Zero(n, n);
        if (a >= nd || b >= nd) return m;
        for (int i = 0; i < spec.d; ++i) {
            m(nd + i, nd + i) = 2.0 * spec.grads[i][a] * spec.grads[i][b];
        }
        return m;
    };
    g.in_domain = [spec, nd](const Vec& p) {
        const Vec x = p.head(nd);
        for (int i = 0; i < spec.d; ++i) {
            if (!(model_phi(spec, i, x) > 0.0)) return false;
        }
        return true;
    };
    return g;
}

Frame model_killing_frame(const ModelSpec& spec) {
    Frame K;
    K.base = Vec::Zero(spec.n);
    const int nd = spec.n - spec.d;
    for (int i = 0; i < spec.d; ++i) {
        Vec v = Vec::Zero(spec.n);
        v[nd + i] = 1.0 / spec.base_vals[i];
        K.vectors.push_back(v);
    }
    K.orthonormal = true;
    return K;
}

double closed_form_sec(const ModelSpec& spec, int i, int j) {
    if (i == j) throw DegeneratePlane("closed_form_sec needs distinct indices");
    if (i < 0 || j < 0 || i >= spec.d || j >= spec.d) {
        throw BadIndex("closed_form_sec index out of range");
    }
    return -spec.grads[i].dot(spec.grads[j]) /
           (spec.base_vals[i] * spec.base_vals[j]);
}

}  // namespace ricci
