#include "ricci/sewing.hpp"

#include <cmath>
#include <random>

namespace ricci {

namespace {

double smoothstep_sigma(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smoothstep_dsigma(double x) {
    return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0;
}

double smoothstep(double x) {
    const double a = smoothstep_sigma(x);
    const double b = smoothstep_sigma(1.0 - x);
    return a / (a + b);
}

double smoothstep_deriv(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = smoothstep_sigma(x);
    const double b = smoothstep_sigma(1.0 - x);
    const double da = smoothstep_dsigma(x);
    const double db = smoothstep_dsigma(1.0 - x);
    return (da * b + a * db) / ((a + b) * (a + b));
}

std::vector<Vec> deterministic_directions(int n, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < count) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        const double nrm = v.norm();
        if (nrm > 1e-8) out.push_back(v / nrm);
    }
    return out;
}

}  // namespace

BumpProfile bump(double delta) {
    if (!(delta > 0.0)) throw BadInput("bump requires delta > 0");
    BumpProfile out;
    out.delta = delta;
    out.phi = [delta](double t) { return smoothstep((2.0 * delta - t) / delta); };
    out.deriv = [delta](double t) {
        return -smoothstep_deriv((2.0 * delta - t) / delta) / delta;
    };
    // The C^1 bound is part of the contract; verify it on a dense grid.
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        worst = std::max(worst, std::abs(out.deriv(2.0 * delta * i / 10000.0)));
    }
    if (worst > 2.0 / delta) {
        throw Error("bump profile violates |phi'| <= 2/delta");
    }
    return out;
}

GeodesicPath geodesic_exp(const MetricField& g, const Vec& p, const Vec& v,
                          double t_max, int steps) {
    const int n = g.dim;
    auto accel = [&](const Vec& x, const Vec& vel) {
        const CurvatureData cd = christoffel(g, x);
        Vec a(n);
        for (int c = 0; c < n; ++c) a[c] = -vel.dot(cd.gamma[c] * vel);
        return a;
    };
    GeodesicPath path;
    path.start = p;
    path.initial_velocity = v;
    const double speed = std::sqrt(std::max(0.0, v.dot(g.value(p) * v)));
    Vec x = p, vel = v;
    path.samples.push_back({0.0, x, vel});
    const double h = t_max / steps;
    for (int s = 0; s < steps; ++s) {
        if (!g.contains(x)) {
            throw DomainExit("geodesic left the metric domain at t = " +
                             std::to_string(s * h * speed));
        }
        const Vec k1x = vel, k1v = accel(x, vel);
        const Vec k2x = vel + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, vel + 0.5 * h * k1v);
        const Vec k3x = vel + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, vel + 0.5 * h * k2v);
        const Vec k4x = vel + h * k3v, k4v = accel(x + h * k3x, vel + h * k3v);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        path.samples.push_back({(s + 1) * h * speed, x, vel});
    }
    return path;
}

ExpResult exp_with_jacobian(const MetricField& g, const Vec& p, const Vec& v,
                            int steps) {
    const int n = g.dim;
    // State: x, v, Jx (n x n), Jv (n x n); variational equations use the
    // Christoffel partials.
    struct State {
        Vec x, v;
        Mat jx, jv;
    };
    auto rhs = [&](const State& s) {
        const GammaPartials gp = christoffel_with_partials(g, s.x);
        State d;
        d.x = s.v;
        d.v = Vec(n);
        for (int c = 0; c < n; ++c) d.v[c] = -s.v.dot(gp.gamma[c] * s.v);
        d.jx = s.jv;
        d.jv = Mat::Zero(n, n);
        // dJv^c/dt = -sum_a ∂_a Γ^c(v, v) Jx(a, col) - 2 Γ^c(v, Jv_col)
        for (int col = 0; col < n; ++col) {
            for (int c = 0; c < n; ++c) {
                double val = 0.0;
                for (int a = 0; a < n; ++a) {
                    val -= s.v.dot(gp.dgamma[a][c] * s.v) * s.jx(a, col);
                }
                val -= 2.0 * s.v.dot(gp.gamma[c] * s.jv.col(col));
                d.jv(c, col) = val;
            }
        }
        return d;
    };
    auto axpy = [](const State& s, double h, const State& d) {
        State out;
        out.x = s.x + h * d.x;
        out.v = s.v + h * d.v;
        out.jx = s.jx + h * d.jx;
        out.jv = s.jv + h * d.jv;
        return out;
    };
    State s{p, v, Mat::Zero(n, n), Mat::Identity(n, n)};
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        if (!g.contains(s.x)) {
            throw DomainExit("geodesic left the metric domain");
        }
        const State k1 = rhs(s);
        const State k2 = rhs(axpy(s, 0.5 * h, k1));
        const State k3 = rhs(axpy(s, 0.5 * h, k2));
        const State k4 = rhs(axpy(s, h, k3));
        s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.jx += h / 6.0 * (k1.jx + 2.0 * k2.jx + 2.0 * k3.jx + k4.jx);
        s.jv += h / 6.0 * (k1.jv + 2.0 * k2.jv + 2.0 * k3.jv + k4.jv);
    }
    return {s.x, s.jx};
}

Vec exp_inverse(const MetricField& g, const Vec& p, const Vec& q, double tol,
                int max_iter, int steps) {
    Vec v = q - p;
    for (int it = 0; it < max_iter; ++it) {
        const ExpResult er = exp_with_jacobian(g, p, v, steps);
        const Vec residual = q - er.point;
        // Update before the convergence test: one polishing step past the
        // tolerance keeps v a smooth function of q (no stopping-rule kinks),
        // which downstream finite differences rely on.
        v += er.jacobian.fullPivLu().solve(residual);
        if (residual.norm() < tol) return v;
    }
    throw OutsideInjectivityEstimate("exp_inverse shooting did not converge");
}

Mat orthonormal_chart_basis(const MetricField& g, const Vec& p) {
    const Mat gp = g.value(p);
    Eigen::LLT<Mat> llt(gp);
    Mat L = llt.matrixL();
    return L.transpose().inverse();
}

MetricField normal_rep(const MetricField& g, const Vec& p, int steps) {
    MetricField out;
    out.dim = g.dim;
    out.scheme = DerivScheme::FiniteDifference;
    out.fd_scale = 4.0;
    const Mat B = orthonormal_chart_basis(g, p);
    const MetricField base = g;
    const Vec center = p;
    out.eval = [base, center, B, steps](const Vec& v) {
        const ExpResult er = exp_with_jacobian(base, center, B * v, steps);
        const Mat D = er.jacobian * B;
        Mat m = D.transpose() * base.eval(er.point) * D;
        return Mat(0.5 * (m + m.transpose()));
    };
    return out;
}

MetricField pullback_model(const MetricField& g, const Vec& p,
                           const MetricField& model, int steps) {
    MetricField out;
    const int n = g.dim;
    if (model.dim != n) throw BadInput("model dimension mismatch");
    out.dim = n;
    out.scheme = DerivScheme::FiniteDifference;
    out.fd_scale = 4.0;
    const Mat B = orthonormal_chart_basis(g, p);
    const Mat Binv = B.inverse();
    const Mat Bm = orthonormal_chart_basis(model, Vec::Zero(n));
    const MetricField base = g;
    const MetricField mod = model;
    const Vec center = p;
    out.eval = [base, mod, center, B, Binv, Bm, n, steps](const Vec& q) {
        const Vec w = exp_inverse(base, center, q, 1e-10, 50, steps);
        const ExpResult eg = exp_with_jacobian(base, center, w, steps);
        const Vec vhat = Binv * w;
        const ExpResult em = exp_with_jacobian(mod, Vec::Zero(n), Bm * vhat, steps);
        const Mat dF = em.jacobian * Bm * Binv * eg.jacobian.inverse();
        Mat m = dF.transpose() * mod.eval(em.point) * dF;
        return Mat(0.5 * (m + m.transpose()));
    };
    if (g.in_domain) {
        out.in_domain = g.in_domain;
    }
    return out;
}

MetricField pullback_model(const MetricField& g, const Vec& p,
                           const ModelSpec& spec, int steps) {
    return pullback_model(g, p, model_metric_field(spec), steps);
}

double radial_compatibility_check(const MetricField& g, const MetricField& gstar,
                                  const Vec& p, int n_rays, int n_radii,
                                  double radius) {
    const int n = g.dim;
    const Mat B = orthonormal_chart_basis(g, p);
    double worst = 0.0;
    const int steps = 200;
    for (const Vec& u : deterministic_directions(n, n_rays, 12345)) {
        const Vec dir = B * u;  // g-unit
        GeodesicPath path = geodesic_exp(g, p, dir, radius, steps);
        for (int i = 1; i <= n_radii; ++i) {
            const double t = radius * i / n_radii;
            // Sample index: parameter equals arc length for a unit ray.
            const int idx = static_cast<int>(std::lround(t / radius * steps));
            const GeodesicSample& s = path.samples[std::min<size_t>(idx, path.samples.size() - 1)];
            const Mat diff = g.eval(s.point) - gstar.eval(s.point);
            const Mat Bq = orthonormal_chart_basis(g, s.point);
            for (int c = 0; c < n; ++c) {
                worst = std::max(worst,
                                 std::abs(s.velocity.dot(diff * Bq.col(c))));
            }
        }
    }
    return worst;
}

MetricField sew(const MetricField& g, const MetricField& gstar, const Vec& p,
                double delta, double compat_tol) {
    const double resid =
        radial_compatibility_check(g, gstar, p, 8, 4, 1.9 * delta);
    if (resid > compat_tol) {
        throw HypothesisViolated("radial compatibility residual " +
                                 std::to_string(resid) + " exceeds tolerance");
    }
    BumpProfile bp = bump(delta);
    MetricField out;
    out.dim = g.dim;
    out.scheme = DerivScheme::FiniteDifference;
    out.fd_scale = std::max(g.fd_scale, gstar.fd_scale);
    const MetricField base = g;
    const MetricField star = gstar;
    const Vec center = p;
    out.eval = [base, star, center, bp, delta](const Vec& q) {
        double t;
        try {
            const Vec w = exp_inverse(base, center, q);
            t = std::sqrt(std::max(0.0, w.dot(base.value(center) * w)));
        } catch (const OutsideInjectivityEstimate&) {
            return base.eval(q);  // far outside the sewing ball
        }
        if (t >= 2.0 * delta) return base.eval(q);
        if (t <= delta) return star.eval(q);
        const double phi = bp.phi(t);
        return Mat((1.0 - phi) * base.eval(q) + phi * star.eval(q));
    };
    if (g.in_domain) out.in_domain = g.in_domain;
    return out;
}

C1Distance c1_distance_estimate(const MetricField& g_ref, const MetricField& g1,
                                const MetricField& g2, const Vec& center,
                                double radius, int n_dirs, int n_radii,
                                double fd_h) {
    const int n = g_ref.dim;
    C1Distance out;
    const auto dirs = deterministic_directions(n, n_dirs, 777);
    const Mat Bc = orthonormal_chart_basis(g_ref, center);
    for (const Vec& u : dirs) {
        const Vec dchart = Bc * u;
        for (int i = 0; i < n_radii; ++i) {
            const double r = radius * std::pow(0.5, i);
            const Vec q = center + r * dchart;
            const Mat F = orthonormal_chart_basis(g_ref, q);
            const Mat diff = g1.eval(q) - g2.eval(q);
            for (int a = 0; a < n; ++a) {
                for (int b = a; b < n; ++b) {
                    const Vec U = F.col(a), V = F.col(b);
                    out.c0 = std::max(out.c0, std::abs(U.dot(diff * V)));
                    for (int c = 0; c < n; ++c) {
                        const Vec X = F.col(c);
                        const Mat dp = g1.eval(q + fd_h * X) - g2.eval(q + fd_h * X);
                        const Mat dm = g1.eval(q - fd_h * X) - g2.eval(q - fd_h * X);
                        const double der =
                            (U.dot(dp * V) - U.dot(dm * V)) / (2.0 * fd_h);
                        out.c1 = std::max(out.c1, std::abs(der));
                    }
                }
            }
        }
    }
    out.c1 = std::max(out.c1, out.c0);
    return out;
}

double estimate_r_constant(const MetricField& g, const MetricField& gstar,
                           const Vec& p, double radius, int n_dirs, int n_radii) {
    const int n = g.dim;
    const Mat gp = g.value(p);
    const Mat Bc = orthonormal_chart_basis(g, p);
    const double fd_h = std::min(1e-4, radius / 100.0);
    const MetricField base = g;
    const MetricField star = gstar;
    const Vec center = p;
    // r-evaluation at one chart point for a frozen frame pair.
    auto r_scalar = [&](const Vec& q, const Vec& U, const Vec& V) {
        const Vec w = exp_inverse(base, center, q);
        const double t2 = w.dot(gp * w);
        if (t2 < 1e-8) throw ExpansionAnomaly("r sample too close to the center");
        const Mat diff = base.eval(q) - star.eval(q);
        return U.dot(diff * V) / t2;
    };
    double c_est = 0.0;
    for (const Vec& u : deterministic_directions(n, n_dirs, 777)) {
        const Vec dchart = Bc * u;
        for (int i = 0; i < n_radii; ++i) {
            const double r = radius * std::pow(0.5, i);
            const Vec q = center + r * dchart;
            const Mat F = orthonormal_chart_basis(base, q);
            for (int a = 0; a < n; ++a) {
                for (int b = a; b < n; ++b) {
                    const Vec U = F.col(a), V = F.col(b);
                    c_est = std::max(c_est, std::abs(r_scalar(q, U, V)));
                    for (int c = 0; c < n; ++c) {
                        const Vec X = F.col(c);
                        const double der = (r_scalar(q + fd_h * X, U, V) -
                                            r_scalar(q - fd_h * X, U, V)) /
                                           (2.0 * fd_h);
                        c_est = std::max(c_est, std::abs(der));
                    }
                }
            }
        }
    }
    return c_est;
}

SewReport sew_report(const MetricField& g, const MetricField& gstar,
                     const Vec& p, double delta, const SewParams& params) {
    SewReport rep;
    rep.delta = delta;
    MetricField blended = sew(g, gstar, p, delta, params.compat_tol);
    const double region = 1.96 * delta;
    rep.c_est = estimate_r_constant(g, gstar, p, region, params.n_dirs,
                                    params.n_radii);
    const double fd_h = std::min(1e-4, delta / 100.0);
    C1Distance dist = c1_distance_estimate(g, g, blended, p, region,
                                           params.n_dirs, params.n_radii, fd_h);
    rep.c0_sample = dist.c0;
    rep.c1_sample = dist.c1;
    rep.bound_c0 = 4.0 * delta * delta * rep.c_est;
    rep.bound_c1 = 12.0 * delta * rep.c_est + 4.0 * delta * delta * rep.c_est;
    rep.pass = rep.c0_sample <= 1.05 * rep.bound_c0 &&
               rep.c1_sample <= 1.05 * rep.bound_c1;
    return rep;
}

TaylorReport jacobi_taylor_check(const MetricField& g, const Vec& p,
                                 const MetricField& model, const Vec& ray,
                                 std::pair<int, int> plane_i,
                                 std::pair<int, int> plane_j, double t0,
                                 int levels, int steps) {
    const int n = g.dim;
    if (levels < 2) throw BadInput("jacobi_taylor_check needs >= 2 levels");
    MetricField Ng = normal_rep(g, p, steps);
    MetricField Nm = normal_rep(model, Vec::Zero(n), steps);
    Vec u = ray / ray.norm();

    auto rotational = [n](std::pair<int, int> plane, const Vec& x) {
        Vec J = Vec::Zero(n);
        J[plane.first] = x[plane.second];
        J[plane.second] = -x[plane.first];
        return J;
    };

    TaylorReport rep;
    std::vector<double> A;
    auto gap_at = [&](double t) {
        const Vec x = t * u;
        const Mat diff = Ng.eval(x) - Nm.eval(x);
        const Vec Ji = rotational(plane_i, x);
        const Vec Jj = rotational(plane_j, x);
        return std::make_pair(Ji.dot(diff * Jj), x);
    };
    auto normalized_gap_at = [&](double t) {
        const Vec x = t * u;
        const Mat G1 = Ng.eval(x);
        const Mat diff = G1 - Nm.eval(x);
        Vec Ji = rotational(plane_i, x);
        Vec Jj = rotational(plane_j, x);
        const double ni = std::sqrt(Ji.dot(G1 * Ji));
        const double nj = std::sqrt(Jj.dot(G1 * Jj));
        if (ni < 1e-14 || nj < 1e-14) {
            throw BadInput("rotational fields vanish along the chosen ray");
        }
        return Ji.dot(diff * Jj) / (ni * nj);
    };
    for (int l = 0; l < levels; ++l) {
        const double t = t0 * std::pow(0.5, l);
        auto [gap, x] = gap_at(t);
        rep.ts.push_back(t);
        rep.gaps.push_back(gap);
        rep.normalized_gaps.push_back(normalized_gap_at(t));
        A.push_back(gap / (t * t * t * t));
    }
    // A t^3-or-lower leading term makes gap/t^4 blow up along the ladder.
    if (std::abs(A.back()) > 4.0 * std::abs(A.front()) + 1e-6) {
        throw ExpansionAnomaly("gap is not dominated by the t^4 term");
    }
    // Richardson extrapolation assuming A(t) = c4 + O(t).
    std::vector<double> table = A;
    for (int stage = 1; stage < levels; ++stage) {
        const double w = std::pow(2.0, stage);
        std::vector<double> next;
        for (size_t i = 0; i + 1 < table.size(); ++i) {
            next.push_back((w * table[i + 1] - table[i]) / (w - 1.0));
        }
        table = next;
    }
    rep.t4_coefficient_est = table[0];

    // -(1/3)(R_g - R_model)(J_i', ∂_t, ∂_t, J_j') at p, evaluated in the
    // orthonormal frames that define the normal coordinates.
    const Mat B = orthonormal_chart_basis(g, p);
    const Mat Bm = orthonormal_chart_basis(model, Vec::Zero(n));
    const PointCurvature pcg = PointCurvature::at(g, p);
    const PointCurvature pcm = PointCurvature::at(model, Vec::Zero(n));
    const Vec dJi = rotational(plane_i, u);
    const Vec dJj = rotational(plane_j, u);
    const double rg =
        pcg.curv.contract(B * dJi, B * u, B * dJj, B * u);
    const double rm =
        pcm.curv.contract(Bm * dJi, Bm * u, Bm * dJj, Bm * u);
    rep.curvature_prediction = -(rg - rm) / 3.0;
    return rep;
}

}  // namespace ricci
