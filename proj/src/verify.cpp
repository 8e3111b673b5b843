#include "ricci/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ricci {

namespace {

struct Clusters {
    // Means of the (at most two) clusters, low before high, plus the
    // membership of each input value (0 = low cluster, 1 = high cluster).
    double low = 0.0, high = 0.0;
    bool split = false;
    bool spread_ok = true;
    std::vector<int> member;
};

Clusters cluster_two(const std::vector<double>& values, double tol) {
    Clusters out;
    out.member.assign(values.size(), 1);
    if (values.empty()) return out;
    std::vector<size_t> order(values.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    size_t cut = 0;
    double best_gap = tol;
    for (size_t i = 1; i < order.size(); ++i) {
        const double gap = values[order[i]] - values[order[i - 1]];
        if (gap > best_gap) {
            best_gap = gap;
            cut = i;
        }
    }
    out.split = cut > 0;
    double lo_min = 0, lo_max = 0, hi_min = 0, hi_max = 0;
    double lo_sum = 0, hi_sum = 0;
    size_t lo_n = 0, hi_n = 0;
    for (size_t i = 0; i < order.size(); ++i) {
        const double v = values[order[i]];
        if (out.split && i < cut) {
            if (lo_n == 0) lo_min = lo_max = v;
            lo_min = std::min(lo_min, v);
            lo_max = std::max(lo_max, v);
            lo_sum += v;
            ++lo_n;
            out.member[order[i]] = 0;
        } else {
            if (hi_n == 0) hi_min = hi_max = v;
            hi_min = std::min(hi_min, v);
            hi_max = std::max(hi_max, v);
            hi_sum += v;
            ++hi_n;
        }
    }
    out.high = hi_n ? hi_sum / hi_n : 0.0;
    out.low = out.split ? lo_sum / lo_n : out.high;
    if (hi_n && hi_max - hi_min > tol) out.spread_ok = false;
    if (lo_n && lo_max - lo_min > tol) out.spread_ok = false;
    return out;
}

}  // namespace

CompsimpReport check_compsimp(const MetricField& g, const Vec& p, const Frame& K,
                              int k) {
    const PointCurvature pc = PointCurvature::at(g, p);
    if (!is_orthonormal(pc.gp, K)) {
        throw FrameNotOrthonormal("check_compsimp requires an orthonormal frame");
    }
    const int d = static_cast<int>(K.vectors.size());
    if (d < k + 1) throw BadInput("check_compsimp requires |K| >= k+1");
    const int n = g.dim;

    CompsimpReport rep;
    rep.tol = g.scheme == DerivScheme::Analytic ? 1e-8 : 1e-4;
    const double tolA = g.scheme_tol();

    // Property (A): R(K_i, K_j) K_l = 0 for mutually distinct indices,
    // measured as the ambient g-norm of the curvature vector.
    const Mat ginv = pc.gp.inverse();
    double worstA = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            for (int l = 0; l < d; ++l) {
                if (l == i || l == j) continue;
                Vec w(n);
                for (int m = 0; m < n; ++m) {
                    Vec em = Vec::Zero(n);
                    em[m] = 1.0;
                    w[m] = pc.curv.contract(em, K.vectors[l], K.vectors[i],
                                            K.vectors[j]);
                }
                worstA = std::max(worstA, std::sqrt(std::max(0.0, w.dot(ginv * w))));
            }
        }
    }
    rep.propA = worstA < tolA;

    // Property (B): off-diagonal sectional values form at most two clusters
    // {-nu, mu}.
    std::vector<double> secs;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            secs.push_back(pc.sectional(K.vectors[i], K.vectors[j]));
            pairs.emplace_back(i, j);
        }
    }
    Clusters cl = cluster_two(secs, rep.tol);
    if (!cl.split) {
        if (std::abs(cl.high) < rep.tol) {
            rep.mu = 0.0;
            rep.nu = 0.0;
        } else if (cl.high > 0.0) {
            rep.mu = cl.high;
            rep.nu = 0.0;
        } else {
            rep.mu = 0.0;
            rep.nu = -cl.high;
        }
        rep.propB = cl.spread_ok;
    } else {
        rep.mu = cl.high;
        rep.nu = -cl.low;
        rep.propB = cl.spread_ok && cl.low < rep.tol && cl.high > -rep.tol;
    }

    // Property (C): each index has at most k-1 negative-cluster partners.
    rep.neg_partner_counts.assign(d, 0);
    if (cl.split && cl.low < -rep.tol) {
        for (size_t m = 0; m < pairs.size(); ++m) {
            if (cl.member[m] == 0) {
                rep.neg_partner_counts[pairs[m].first]++;
                rep.neg_partner_counts[pairs[m].second]++;
            }
        }
    }
    rep.propC = true;
    for (int c : rep.neg_partner_counts) {
        if (c > k - 1) rep.propC = false;
    }

    rep.propD = rep.mu - (k - 1) * rep.nu > 0.0;
    rep.ric_lower = ric_lower_bound(d, k, rep.mu, rep.nu);
    return rep;
}

double ric_lower_bound(int d, int k, double mu, double nu) {
    return (d - k) * mu - (k - 1) * nu;
}

namespace {

// Curvature restricted to an orthonormal frame; all queries afterwards are
// Euclidean in frame coefficients.
struct FrameCurvature {
    int d;
    std::vector<double> r;  // d^4

    double at(int i, int j, int k, int l) const {
        return r[((static_cast<size_t>(i) * d + j) * d + k) * d + l];
    }
    double contract(const Vec& a, const Vec& b, const Vec& c, const Vec& e) const {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            if (a[i] == 0.0) continue;
            for (int j = 0; j < d; ++j) {
                if (b[j] == 0.0) continue;
                for (int k = 0; k < d; ++k) {
                    if (c[k] == 0.0) continue;
                    for (int l = 0; l < d; ++l) {
                        s += at(i, j, k, l) * a[i] * b[j] * c[k] * e[l];
                    }
                }
            }
        }
        return s;
    }
    double sec_unit(const Vec& u, const Vec& e) const { return contract(u, e, u, e); }
};

FrameCurvature restrict_curvature(const PointCurvature& pc, const Frame& K) {
    FrameCurvature fc;
    fc.d = static_cast<int>(K.vectors.size());
    fc.r.assign(static_cast<size_t>(fc.d) * fc.d * fc.d * fc.d, 0.0);
    for (int i = 0; i < fc.d; ++i)
        for (int j = 0; j < fc.d; ++j)
            for (int k = 0; k < fc.d; ++k)
                for (int l = 0; l < fc.d; ++l)
                    fc.r[((static_cast<size_t>(i) * fc.d + j) * fc.d + k) * fc.d + l] =
                        pc.curv.contract(K.vectors[i], K.vectors[j], K.vectors[k],
                                         K.vectors[l]);
    return fc;
}

struct QueryEval {
    double value;
    Vec u;
    std::vector<Vec> basis;
    bool ok;
};

// Orthonormalize the rows of A, build u from coefficients c, and sum the k
// sectional curvatures over the complement of u.
QueryEval eval_query(const FrameCurvature& fc, const Mat& A, const Vec& c, int k) {
    QueryEval out;
    out.ok = false;
    const int m = static_cast<int>(A.rows());
    std::vector<Vec> q;
    for (int i = 0; i < m; ++i) {
        Vec w = A.row(i).transpose();
        for (const Vec& e : q) w -= e.dot(w) * e;
        const double nrm = w.norm();
        if (nrm < 1e-10) return out;
        q.push_back(w / nrm);
    }
    Vec u = Vec::Zero(fc.d);
    for (int i = 0; i < m; ++i) u += c[i] * q[i];
    const double un = u.norm();
    if (un < 1e-10) return out;
    u /= un;
    std::vector<Vec> comp;
    for (int i = 0; i < m && static_cast<int>(comp.size()) < k; ++i) {
        Vec w = q[i] - u.dot(q[i]) * u;
        for (const Vec& e : comp) w -= e.dot(w) * e;
        const double nrm = w.norm();
        if (nrm > 1e-8) comp.push_back(w / nrm);
    }
    if (static_cast<int>(comp.size()) != k) return out;
    double v = 0.0;
    for (const Vec& e : comp) v += fc.sec_unit(u, e);
    out.value = v;
    out.u = u;
    out.basis = std::move(comp);
    out.ok = true;
    return out;
}

}  // namespace

MinRicResult min_ric_k(const PointCurvature& pc, const Frame& K, int k,
                       int budget, uint64_t seed,
                       std::vector<double>* sample_values) {
    if (budget < 1) throw BadInput("min_ric_k requires budget >= 1");
    if (!is_orthonormal(pc.gp, K)) {
        throw FrameNotOrthonormal("min_ric_k requires an orthonormal frame");
    }
    const int d = static_cast<int>(K.vectors.size());
    if (d < k + 1) throw BadInput("min_ric_k requires |K| >= k+1");
    const FrameCurvature fc = restrict_curvature(pc, K);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_mat = [&](int r, int c) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
        return m;
    };

    MinRicResult res;
    res.samples = 0;
    bool have = false;
    Mat bestA;
    Vec bestC;
    for (int s = 0; s < budget; ++s) {
        Mat A = random_mat(k + 1, d);
        Vec c(k + 1);
        for (int i = 0; i <= k; ++i) c[i] = gauss(rng);
        QueryEval q = eval_query(fc, A, c, k);
        if (!q.ok) continue;
        ++res.samples;
        if (sample_values) sample_values->push_back(q.value);
        if (!have || q.value < res.min_value) {
            have = true;
            res.min_value = q.value;
            res.argmin.u = q.u;
            res.argmin.basis = q.basis;
            bestA = A;
            bestC = c;
        }
    }
    if (!have) throw BadInput("min_ric_k drew no valid samples");

    // Derivative-free projected coordinate descent around the best sample.
    double step = 0.1;
    for (int iter = 0; iter < 100; ++iter) {
        double best_improvement = 0.0;
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= d; ++j) {
                for (double sign : {1.0, -1.0}) {
                    Mat A = bestA;
                    Vec c = bestC;
                    if (j < d) {
                        A(i, j) += sign * step;
                    } else {
                        c[i] += sign * step;
                    }
                    QueryEval q = eval_query(fc, A, c, k);
                    if (q.ok && q.value < res.min_value) {
                        best_improvement =
                            std::max(best_improvement, res.min_value - q.value);
                        res.min_value = q.value;
                        res.argmin.u = q.u;
                        res.argmin.basis = q.basis;
                        bestA = A;
                        bestC = c;
                    }
                }
            }
        }
        if (best_improvement == 0.0) {
            step *= 0.5;
        } else if (best_improvement < 1e-12) {
            break;
        }
    }
    res.argmin.value = res.min_value;
    return res;
}

MinRicResult min_ric_k(const MetricField& g, const Vec& p, const Frame& K, int k,
                       int budget, uint64_t seed,
                       std::vector<double>* sample_values) {
    return min_ric_k(PointCurvature::at(g, p), K, k, budget, seed, sample_values);
}

}  // namespace ricci
