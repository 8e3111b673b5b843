#include "ricci/killing.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace ricci {

Vec SffData::apply(const Vec& u, const Vec& v) const {
    Vec out(normal_dim());
    for (int a = 0; a < normal_dim(); ++a) {
        out[a] = u.dot(values[a] * v);
    }
    return out;
}

std::pair<Frame, Frame> slice_frames(const MetricField& g, const Slice& slice) {
    const Vec& p = slice.base;
    const Mat gp = g.value(p);
    const int n = g.dim;
    std::vector<Vec> raw;
    for (int c : slice.coords) {
        if (c < 0 || c >= n) throw BadInput("slice coordinate out of range");
        Vec e = Vec::Zero(n);
        e[c] = 1.0;
        raw.push_back(e);
    }
    Frame tangent = orthonormalize(gp, p, raw);
    if (tangent.vectors.size() != raw.size()) {
        throw FrameNotOrthonormal("slice tangent frame is degenerate");
    }
    // Complete to an orthonormal normal frame from the coordinate basis.
    std::vector<Vec> residuals;
    for (int c = 0; c < n; ++c) {
        Vec e = Vec::Zero(n);
        e[c] = 1.0;
        for (const Vec& t : tangent.vectors) e -= t.dot(gp * e) * t;
        residuals.push_back(e);
    }
    Frame normal = orthonormalize(gp, p, residuals);
    if (static_cast<int>(normal.vectors.size()) != n - slice.dim()) {
        throw FrameNotOrthonormal("could not complete normal frame");
    }
    return {tangent, normal};
}

SffData second_fundamental_form(const MetricField& g, const Slice& slice) {
    const Vec& p = slice.base;
    const Mat gp = g.value(p);
    auto [tangent, normal] = slice_frames(g, slice);
    const CurvatureData cd = christoffel(g, p);
    const int n = g.dim;
    const int dt = static_cast<int>(tangent.vectors.size());
    const int dn = static_cast<int>(normal.vectors.size());

    SffData sff;
    sff.at = p;
    sff.tangent = tangent;
    sff.normal = normal;
    sff.values.assign(dn, Mat::Zero(dt, dt));
    for (int i = 0; i < dt; ++i) {
        for (int j = i; j < dt; ++j) {
            // (∇_{T_i} T_j)^c with constant-component extensions.
            Vec cov = Vec::Zero(n);
            for (int c = 0; c < n; ++c) {
                cov[c] = tangent.vectors[i].dot(cd.gamma[c] * tangent.vectors[j]);
            }
            for (int a = 0; a < dn; ++a) {
                const double v = cov.dot(gp * normal.vectors[a]);
                sff.values[a](i, j) = v;
                sff.values[a](j, i) = v;
            }
        }
    }
    return sff;
}

namespace {

// Euclidean orthonormal basis of the complement of a unit vector u.
std::vector<Vec> complement_basis(const Vec& u) {
    const int m = static_cast<int>(u.size());
    std::vector<Vec> out;
    for (int i = 0; i < m && static_cast<int>(out.size()) < m - 1; ++i) {
        Vec w = Vec::Zero(m);
        w[i] = 1.0;
        w -= u.dot(w) * u;
        for (const Vec& e : out) w -= e.dot(w) * e;
        const double nrm = w.norm();
        if (nrm > 1e-8) out.push_back(w / nrm);
    }
    return out;
}

}  // namespace

int kernel_dimension(const SffData& sff, const Vec& u) {
    const int dt = sff.tangent_dim();
    const int dn = sff.normal_dim();
    Vec un = u / u.norm();
    std::vector<Vec> comp = complement_basis(un);
    Mat B(dn, dt - 1);
    for (size_t m = 0; m < comp.size(); ++m) {
        B.col(static_cast<int>(m)) = sff.apply(un, comp[m]);
    }
    Eigen::JacobiSVD<Mat> svd(B);
    const Vec sv = svd.singularValues();
    const double cut = 1e-10 * (sv.size() ? sv.maxCoeff() + 1.0 : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > cut) ++rank;
    }
    return dt - 1 - rank;
}

MetricField induced_metric(const MetricField& g, const Slice& slice) {
    MetricField q;
    const int m = slice.dim();
    q.dim = m;
    q.scheme = g.scheme;
    const Slice sl = slice;
    auto embed = [sl](const Vec& t) {
        Vec p = sl.base;
        for (int i = 0; i < sl.dim(); ++i) p[sl.coords[i]] += t[i];
        return p;
    };
    auto restrict_mat = [sl, m](const Mat& full) {
        Mat out(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out(i, j) = full(sl.coords[i], sl.coords[j]);
        return out;
    };
    const MetricField parent = g;
    q.eval = [parent, embed, restrict_mat](const Vec& t) {
        return restrict_mat(parent.eval(embed(t)));
    };
    if (g.scheme == DerivScheme::Analytic && g.d1) {
        q.d1 = [parent, sl, embed, restrict_mat](const Vec& t, int a) {
            return restrict_mat(parent.d1(embed(t), sl.coords[a]));
        };
    }
    if (g.scheme == DerivScheme::Analytic && g.d2) {
        q.d2 = [parent, sl, embed, restrict_mat](const Vec& t, int a, int b) {
            return restrict_mat(parent.d2(embed(t), sl.coords[a], sl.coords[b]));
        };
    }
    if (g.in_domain) {
        q.in_domain = [parent, embed](const Vec& t) {
            return parent.in_domain(embed(t));
        };
    }
    return q;
}

namespace {

double sff_quartic(const SffData& sff, const Vec& u) {
    const Vec iuu = sff.apply(u, u);
    return iuu.squaredNorm();
}

// Canonical sign: first coefficient of largest magnitude made positive.
Vec canonical_sign(Vec u) {
    for (int i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > 1e-12) {
            if (u[i] < 0) u = -u;
            break;
        }
    }
    return u;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace

NonPositivePair find_nonpositive_pair(const MetricField& g, const Slice& slice,
                                      int k) {
    const int n = g.dim;
    const int dimN = slice.dim();
    if (2 * dimN <= n + k) {
        throw HypothesisNotViolated(
            "slice dimension does not exceed (n+k)/2; the bound is respected");
    }

    // The argument needs sec_N = 0 on the slice; check rather than assume.
    {
        const MetricField induced = induced_metric(g, slice);
        const PointCurvature ipc = PointCurvature::at(induced, Vec::Zero(dimN));
        const double tol = induced.scheme == DerivScheme::Analytic ? 1e-8 : 1e-4;
        for (int i = 0; i < dimN; ++i) {
            for (int j = i + 1; j < dimN; ++j) {
                Vec u = Vec::Zero(dimN), v = Vec::Zero(dimN);
                u[i] = 1.0;
                v[j] = 1.0;
                if (std::abs(ipc.sectional(u, v)) > tol) {
                    throw Error("slice is not intrinsically flat at the base point");
                }
            }
        }
    }

    const SffData sff = second_fundamental_form(g, slice);
    const int dt = sff.tangent_dim();

    // Global minimizer of |II(u,u)|^2 over the unit sphere: 32 antipodally
    // paired starts, projected coordinate descent each.
    std::mt19937_64 rng(0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec best_u;
    double best_q = 0.0;
    bool have = false;
    for (int s = 0; s < 16; ++s) {
        Vec u0(dt);
        for (int i = 0; i < dt; ++i) u0[i] = gauss(rng);
        u0.normalize();
        for (const double sign : {1.0, -1.0}) {
            Vec u = sign * u0;
            double q = sff_quartic(sff, u);
            double step = 0.5;
            for (int iter = 0; iter < 200 && step > 1e-14; ++iter) {
                bool improved = false;
                for (int i = 0; i < dt; ++i) {
                    for (const double dir : {1.0, -1.0}) {
                        Vec w = u;
                        w[i] += dir * step;
                        w.normalize();
                        const double qw = sff_quartic(sff, w);
                        if (qw < q - 1e-16) {
                            q = qw;
                            u = w;
                            improved = true;
                        }
                    }
                }
                if (!improved) step *= 0.5;
            }
            u = canonical_sign(u);
            if (!have || q < best_q - 1e-14 ||
                (std::abs(q - best_q) <= 1e-14 && lex_less(u, best_u))) {
                have = true;
                best_q = q;
                best_u = u;
            }
        }
    }

    // k orthonormal kernel vectors of II(u, ·) from the smallest singular
    // directions.
    std::vector<Vec> comp = complement_basis(best_u);
    const int dn = sff.normal_dim();
    Mat B(dn, dt - 1);
    for (size_t m = 0; m < comp.size(); ++m) {
        B.col(static_cast<int>(m)) = sff.apply(best_u, comp[m]);
    }
    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double cut = 1e-10 * (sv.size() ? sv.maxCoeff() + 1.0 : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > cut) ++rank;
    }
    const int kernel = dt - 1 - rank;
    if (kernel < k) {
        throw RankAnomaly("kernel of II(u,.) is numerically smaller than k");
    }
    NonPositivePair out;
    out.u = best_u;
    out.ii_uu_norm2 = best_q;
    for (int i = 0; i < k; ++i) {
        const Vec coeff = svd.matrixV().col(dt - 2 - i);
        Vec e = Vec::Zero(dt);
        for (size_t m = 0; m < comp.size(); ++m) e += coeff[static_cast<int>(m)] * comp[m];
        out.e.push_back(e);
    }

    const PointCurvature pc = PointCurvature::at(g, slice.base);
    auto ambient = [&](const Vec& coeffs) {
        Vec v = Vec::Zero(n);
        for (int i = 0; i < dt; ++i) v += coeffs[i] * sff.tangent.vectors[i];
        return v;
    };
    const Vec u_amb = ambient(best_u);
    const Vec iuu = sff.apply(best_u, best_u);
    out.ric_value = 0.0;
    for (const Vec& e : out.e) {
        out.ric_value += pc.sectional(u_amb, ambient(e));
        const double cross = iuu.dot(sff.apply(e, e));
        out.cross_terms.push_back(cross);
        if (4.0 * (cross - best_q) < -1e-6) out.f2_certificate = false;
    }
    return out;
}

double gauss_equation_check(const MetricField& g, const SffData& sff,
                            const Vec& u, const Vec& v, double intrinsic_sec) {
    const int n = g.dim;
    const int dt = sff.tangent_dim();
    auto ambient = [&](const Vec& coeffs) {
        Vec w = Vec::Zero(n);
        for (int i = 0; i < dt; ++i) w += coeffs[i] * sff.tangent.vectors[i];
        return w;
    };
    const double sec_m = sectional(g, sff.at, ambient(u), ambient(v));
    const double cross = sff.apply(u, u).dot(sff.apply(v, v));
    const double mixed = sff.apply(u, v).squaredNorm();
    return sec_m - (intrinsic_sec + mixed - cross);
}

}  // namespace ricci
