#include "ricci/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ricci {

double fd_step(const Vec& p) { return 1e-4 * (1.0 + p.norm()); }

Mat MetricField::value(const Vec& p) const {
    Mat g = eval(p);
    const double scale = 1.0 + g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DegenerateMetric("metric evaluation is not symmetric");
    }
    g = 0.5 * (g + g.transpose());
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) {
        throw DegenerateMetric("metric not positive definite at point");
    }
    return g;
}

Mat MetricField::deriv1(const Vec& p, int a) const {
    if (scheme == DerivScheme::Analytic && d1) return d1(p, a);
    const double h = fd_scale * fd_step(p);
    Vec pp = p, pm = p;
    pp[a] += h;
    pm[a] -= h;
    return (eval(pp) - eval(pm)) / (2.0 * h);
}

Mat MetricField::deriv2(const Vec& p, int a, int b) const {
    if (scheme == DerivScheme::Analytic && d2) return d2(p, a, b);
    const double h = fd_scale * fd_step(p);
    if (a == b) {
        // 5-point second-derivative stencil.
        Vec p2p = p, p1p = p, p1m = p, p2m = p;
        p2p[a] += 2 * h;
        p1p[a] += h;
        p1m[a] -= h;
        p2m[a] -= 2 * h;
        return (-eval(p2p) + 16.0 * eval(p1p) - 30.0 * eval(p) +
                16.0 * eval(p1m) - eval(p2m)) /
               (12.0 * h * h);
    }
    Vec pp = p, pm = p, mp = p, mm = p;
    pp[a] += h; pp[b] += h;
    pm[a] += h; pm[b] -= h;
    mp[a] -= h; mp[b] += h;
    mm[a] -= h; mm[b] -= h;
    return (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * h * h);
}

MetricField euclidean_metric(int n) {
    MetricField g;
    g.dim = n;
    g.scheme = DerivScheme::Analytic;
    g.eval = [n](const Vec&) { return Mat::Identity(n, n); };
    g.d1 = [n](const Vec&, int) { return Mat::Zero(n, n); };
    g.d2 = [n](const Vec&, int, int) { return Mat::Zero(n, n); };
    return g;
}

MetricField constant_curvature_metric(int n, double kappa) {
    MetricField g;
    g.dim = n;
    g.scheme = DerivScheme::Analytic;
    auto lam = [kappa](const Vec& p) {
        const double s = 1.0 + kappa * p.squaredNorm();
        return 4.0 / (s * s);
    };
    g.eval = [n, lam](const Vec& p) { return Mat(lam(p) * Mat::Identity(n, n)); };
    g.d1 = [n, kappa](const Vec& p, int a) {
        const double s = 1.0 + kappa * p.squaredNorm();
        const double dl = -16.0 * kappa * p[a] / (s * s * s);
        return Mat(dl * Mat::Identity(n, n));
    };
    g.d2 = [n, kappa](const Vec& p, int a, int b) {
        const double s = 1.0 + kappa * p.squaredNorm();
        double dd = 96.0 * kappa * kappa * p[a] * p[b] / (s * s * s * s);
        if (a == b) dd += -16.0 * kappa / (s * s * s);
        return Mat(dd * Mat::Identity(n, n));
    };
    if (kappa < 0.0) {
        g.in_domain = [kappa](const Vec& p) {
            return 1.0 + kappa * p.squaredNorm() > 1e-8;
        };
    }
    return g;
}

double CurvatureData::contract(const Vec& a, const Vec& b, const Vec& c,
                               const Vec& d) const {
    double sum = 0.0;
    const int n = dim;
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (b[j] == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                if (c[k] == 0.0) continue;
                for (int l = 0; l < n; ++l) {
                    sum += riem(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
                }
            }
        }
    }
    return sum;
}

namespace {

std::vector<Mat> gamma_at(const MetricField& g, const Vec& p) {
    const int n = g.dim;
    const Mat gp = g.value(p);
    const Mat ginv = gp.inverse();
    std::vector<Mat> dg(n);
    for (int a = 0; a < n; ++a) dg[a] = g.deriv1(p, a);
    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += ginv(i, l) * (dg[j](l, k) + dg[k](j, l) - dg[l](j, k));
                }
                gamma[i](j, k) = 0.5 * s;
                gamma[i](k, j) = 0.5 * s;
            }
        }
    }
    return gamma;
}

}  // namespace

GammaPartials christoffel_with_partials(const MetricField& g, const Vec& p) {
    GammaPartials out;
    out.gamma = gamma_at(g, p);
    const int n = g.dim;
    out.dgamma.assign(n, std::vector<Mat>(n, Mat::Zero(n, n)));
    if (g.scheme == DerivScheme::Analytic && g.d1 && g.d2) {
        const Mat gp = g.value(p);
        const Mat ginv = gp.inverse();
        std::vector<Mat> dg(n);
        for (int a = 0; a < n; ++a) dg[a] = g.deriv1(p, a);
        std::vector<std::vector<Mat>> ddg(n, std::vector<Mat>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) ddg[a][b] = g.deriv2(p, a, b);
        std::vector<Mat> dginv(n);
        for (int a = 0; a < n; ++a) dginv[a] = -ginv * dg[a] * ginv;
        for (int a = 0; a < n; ++a) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    for (int k = 0; k < n; ++k) {
                        double s = 0.0;
                        for (int l = 0; l < n; ++l) {
                            s += dginv[a](i, l) *
                                     (dg[j](l, k) + dg[k](j, l) - dg[l](j, k)) +
                                 ginv(i, l) * (ddg[a][j](l, k) + ddg[a][k](j, l) -
                                               ddg[a][l](j, k));
                        }
                        out.dgamma[a][i](j, k) = 0.5 * s;
                    }
                }
            }
        }
    } else {
        const double h = g.fd_scale * fd_step(p);
        for (int a = 0; a < n; ++a) {
            Vec pp = p, pm = p;
            pp[a] += h;
            pm[a] -= h;
            auto gp1 = gamma_at(g, pp);
            auto gm1 = gamma_at(g, pm);
            for (int i = 0; i < n; ++i) {
                out.dgamma[a][i] = (gp1[i] - gm1[i]) / (2.0 * h);
            }
        }
    }
    return out;
}

CurvatureData christoffel(const MetricField& g, const Vec& p) {
    CurvatureData out;
    out.at = p;
    out.dim = g.dim;
    out.gamma = gamma_at(g, p);
    return out;
}

CurvatureData riemann(const MetricField& g, const Vec& p) {
    const int n = g.dim;
    CurvatureData out;
    out.at = p;
    out.dim = n;
    GammaPartials gb = christoffel_with_partials(g, p);
    out.gamma = gb.gamma;
    const Mat gp = g.value(p);

    // R^m_{jkl} = ∂_k Γ^m_{lj} - ∂_l Γ^m_{kj} + Γ^m_{ka} Γ^a_{lj} - Γ^m_{la} Γ^a_{kj}
    // lowered against the first index.
    out.riem_flat.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    std::vector<double> up(static_cast<size_t>(n) * n * n * n, 0.0);
    auto idx = [n](int i, int j, int k, int l) {
        return ((static_cast<size_t>(i) * n + j) * n + k) * n + l;
    };
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    double v = gb.dgamma[k][m](l, j) - gb.dgamma[l][m](k, j);
                    for (int a = 0; a < n; ++a) {
                        v += gb.gamma[m](k, a) * gb.gamma[a](l, j) -
                             gb.gamma[m](l, a) * gb.gamma[a](k, j);
                    }
                    up[idx(m, j, k, l)] = v;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < n; ++m) v += gp(i, m) * up[idx(m, j, k, l)];
                    out.riem_flat[idx(i, j, k, l)] = v;
                }
            }
        }
    }
    return out;
}

Frame orthonormalize(const Mat& gp, const Vec& p, const std::vector<Vec>& raw) {
    Frame out;
    out.base = p;
    if (raw.empty()) return out;
    const int m = static_cast<int>(raw.size());
    Mat A(gp.rows(), m);
    for (int i = 0; i < m; ++i) A.col(i) = raw[i];
    Mat gram = A.transpose() * gp * A;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const double emax = es.eigenvalues().maxCoeff();
    const double emin = es.eigenvalues().minCoeff();
    if (emin > emax * 1e-16 && emin < emax / 1e8) {
        throw FrameNotOrthonormal("frame Gram matrix condition number exceeds 1e8");
    }
    // Modified Gram-Schmidt with pivoting on the largest remaining g-norm.
    std::vector<Vec> work = raw;
    std::vector<bool> used(work.size(), false);
    const double drop = std::sqrt(emax) * 1e-8;
    for (size_t step = 0; step < work.size(); ++step) {
        int best = -1;
        double best_norm = drop;
        for (size_t i = 0; i < work.size(); ++i) {
            if (used[i]) continue;
            const double nrm = std::sqrt(std::max(0.0, work[i].dot(gp * work[i])));
            if (nrm > best_norm) {
                best = static_cast<int>(i);
                best_norm = nrm;
            }
        }
        if (best < 0) break;
        used[best] = true;
        Vec e = work[best] / best_norm;
        out.vectors.push_back(e);
        for (size_t i = 0; i < work.size(); ++i) {
            if (used[i]) continue;
            work[i] -= e.dot(gp * work[i]) * e;
        }
    }
    out.orthonormal = true;
    return out;
}

bool is_orthonormal(const Mat& gp, const Frame& K, double tol) {
    const int m = static_cast<int>(K.vectors.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double v = K.vectors[i].dot(gp * K.vectors[j]);
            if (std::abs(v - (i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

PointCurvature PointCurvature::at(const MetricField& g, const Vec& p) {
    PointCurvature pc;
    pc.p = p;
    pc.gp = g.value(p);
    pc.curv = riemann(g, p);
    return pc;
}

double PointCurvature::sectional(const Vec& u, const Vec& v) const {
    const double uu = inner(u, u);
    const double vv = inner(v, v);
    const double uv = inner(u, v);
    const double den = uu * vv - uv * uv;
    if (den < 1e-14 * (uu * vv + 1e-300)) {
        throw DegeneratePlane("sectional curvature of a degenerate plane");
    }
    return curv.contract(u, v, u, v) / den;
}

double PointCurvature::ric_k(const Vec& u, const std::vector<Vec>& span_v,
                             int k) const {
    Frame V = orthonormalize(gp, p, span_v);
    if (static_cast<int>(V.vectors.size()) != k + 1) {
        throw BadSubspaceDim("V must span a (k+1)-dimensional subspace");
    }
    const double unorm = std::sqrt(inner(u, u));
    Vec res = u;
    for (const Vec& e : V.vectors) res -= inner(u, e) * e;
    if (std::sqrt(std::max(0.0, inner(res, res))) > 1e-10 * unorm) {
        throw VectorOutsideSubspace("u does not lie in span(V)");
    }
    // Orthonormal basis of the complement of u in span(V).
    std::vector<Vec> with_u;
    with_u.push_back(u / unorm);
    for (const Vec& e : V.vectors) with_u.push_back(e);
    Vec eu = with_u[0];
    std::vector<Vec> comp;
    for (size_t i = 1; i < with_u.size() && static_cast<int>(comp.size()) < k; ++i) {
        Vec w = with_u[i] - inner(with_u[i], eu) * eu;
        for (const Vec& c : comp) w -= inner(w, c) * c;
        const double nrm = std::sqrt(std::max(0.0, inner(w, w)));
        if (nrm > 1e-9) comp.push_back(w / nrm);
    }
    if (static_cast<int>(comp.size()) != k) {
        throw BadSubspaceDim("could not extract k-dimensional complement of u");
    }
    double sum = 0.0;
    for (const Vec& e : comp) sum += sectional(u, e);
    return sum;
}

double sectional(const MetricField& g, const Vec& p, const Vec& u, const Vec& v) {
    return PointCurvature::at(g, p).sectional(u, v);
}

double ric_k(const MetricField& g, const Vec& p, const Vec& u,
             const std::vector<Vec>& V, int k) {
    return PointCurvature::at(g, p).ric_k(u, V, k);
}

Mat restricted_ricci_operator(const PointCurvature& pc, const Frame& K) {
    if (!is_orthonormal(pc.gp, K)) {
        throw FrameNotOrthonormal("restricted Ricci operator needs an orthonormal frame");
    }
    const int d = static_cast<int>(K.vectors.size());
    Mat M = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int l = 0; l < d; ++l) {
                s += pc.curv.contract(K.vectors[i], K.vectors[l], K.vectors[j],
                                      K.vectors[l]);
            }
            M(i, j) = s;
            M(j, i) = s;
        }
    }
    return M;
}

Mat restricted_ricci_operator(const MetricField& g, const Vec& p, const Frame& K) {
    return restricted_ricci_operator(PointCurvature::at(g, p), K);
}

Mat restricted_curvature_operator(const PointCurvature& pc, const Frame& K) {
    if (!is_orthonormal(pc.gp, K)) {
        throw FrameNotOrthonormal("restricted curvature operator needs an orthonormal frame");
    }
    const int d = static_cast<int>(K.vectors.size());
    const int m = d * (d - 1) / 2;
    std::vector<std::pair<int, int>> wedge;
    wedge.reserve(m);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) wedge.emplace_back(i, j);
    Mat M(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            M(a, b) = pc.curv.contract(K.vectors[wedge[a].first],
                                       K.vectors[wedge[a].second],
                                       K.vectors[wedge[b].first],
                                       K.vectors[wedge[b].second]);
        }
    }
    return M;
}

Mat restricted_curvature_operator(const MetricField& g, const Vec& p, const Frame& K) {
    return restricted_curvature_operator(PointCurvature::at(g, p), K);
}

Mat lie_derivative_metric(const MetricField& g,
                          const std::function<Vec(const Vec&)>& K, const Vec& p) {
    const int n = g.dim;
    const Mat gp = g.value(p);
    const double h = fd_step(p);
    const Vec Kp = K(p);
    Mat dK(n, n);  // dK(a, i) = ∂_i K^a
    for (int i = 0; i < n; ++i) {
        Vec pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        dK.col(i) = (K(pp) - K(pm)) / (2.0 * h);
    }
    Mat L = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) L += Kp[a] * g.deriv1(p, a);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                s += gp(a, j) * dK(a, i) + gp(i, a) * dK(a, j);
            }
            L(i, j) += s;
        }
    }
    return L;
}

}  // namespace ricci
