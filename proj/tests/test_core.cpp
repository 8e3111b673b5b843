#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ricci/core.hpp"
#include "ricci/model.hpp"

using namespace ricci;

namespace {

Vec vec(std::initializer_list<double> vals) {
    Vec v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

// dr^2 + r^2 dtheta^2 with closed-form derivatives.
MetricField polar_metric() {
    MetricField g;
    g.dim = 2;
    g.scheme = DerivScheme::Analytic;
    g.eval = [](const Vec& p) {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = p[0] * p[0];
        return m;
    };
    g.d1 = [](const Vec& p, int a) {
        Mat m = Mat::Zero(2, 2);
        if (a == 0) m(1, 1) = 2.0 * p[0];
        return m;
    };
    g.d2 = [](const Vec&, int a, int b) {
        Mat m = Mat::Zero(2, 2);
        if (a == 0 && b == 0) m(1, 1) = 2.0;
        return m;
    };
    g.in_domain = [](const Vec& p) { return p[0] > 1e-6; };
    return g;
}

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

void check_riemann_identities(const MetricField& g, const Vec& p, double tol) {
    const CurvatureData cd = riemann(g, p);
    const int n = g.dim;
    double scale = 1.0;
    for (double v : cd.riem_flat) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CHECK(cd.gamma[i](j, 0) == doctest::Approx(cd.gamma[i](0, j)).epsilon(1e-12));
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    const double r = cd.riem(i, j, k, l);
                    CHECK(std::abs(r + cd.riem(j, i, k, l)) < tol * scale);
                    CHECK(std::abs(r + cd.riem(i, j, l, k)) < tol * scale);
                    CHECK(std::abs(r - cd.riem(k, l, i, j)) < tol * scale);
                    const double bianchi = cd.riem(i, j, k, l) +
                                           cd.riem(i, k, l, j) +
                                           cd.riem(i, l, j, k);
                    CHECK(std::abs(bianchi) < tol * scale);
                }
            }
        }
    }
}

}  // namespace

TEST_CASE("euclidean metric is flat") {
    const MetricField g = euclidean_metric(3);
    const Vec p = vec({0.3, -1.2, 0.7});
    const CurvatureData cd = riemann(g, p);
    for (int i = 0; i < 3; ++i) {
        CHECK(cd.gamma[i].cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }
    const MetricField g4 = euclidean_metric(4);
    const CurvatureData cd4 = riemann(g4, Vec::Zero(4));
    for (double v : cd4.riem_flat) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("polar chart Christoffel symbols at r=2") {
    const MetricField g = polar_metric();
    const CurvatureData cd = christoffel(g, vec({2.0, 0.5}));
    CHECK(cd.gamma[0](1, 1) == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(cd.gamma[1](0, 1) == doctest::Approx(0.5).epsilon(1e-10));
    // Flat in disguise: zero curvature.
    const CurvatureData r = riemann(g, vec({2.0, 0.5}));
    for (double v : r.riem_flat) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("finite differences agree with analytic derivatives") {
    MetricField g = constant_curvature_metric(3, 1.0);
    MetricField gfd = g;
    gfd.scheme = DerivScheme::FiniteDifference;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = random_vec(rng, 3, 0.3);
        for (int a = 0; a < 3; ++a) {
            CHECK((g.deriv1(p, a) - gfd.deriv1(p, a)).cwiseAbs().maxCoeff() < 1e-6);
            for (int b = 0; b < 3; ++b) {
                CHECK((g.deriv2(p, a, b) - gfd.deriv2(p, a, b)).cwiseAbs().maxCoeff() <
                      1e-4);
            }
        }
    }
}

TEST_CASE("unit sphere curvature tensor is g_ik g_jl - g_il g_jk") {
    const MetricField g = constant_curvature_metric(3, 1.0);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = random_vec(rng, 3, 0.4);
        const Mat gp = g.value(p);
        const CurvatureData cd = riemann(g, p);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int k = 0; k < 3; ++k) {
                    for (int l = 0; l < 3; ++l) {
                        const double expect = gp(i, k) * gp(j, l) - gp(i, l) * gp(j, k);
                        CHECK(cd.riem(i, j, k, l) ==
                              doctest::Approx(expect).epsilon(1e-9).scale(1.0));
                    }
                }
            }
        }
    }
}

TEST_CASE("Riemann symmetries and Bianchi identity on probe corpus") {
    std::mt19937_64 rng(11);
    const MetricField flat = euclidean_metric(3);
    const MetricField sphere = constant_curvature_metric(3, 1.0);
    const MetricField hyper = constant_curvature_metric(3, -0.5);
    const ModelSpec spec = build_model(4, 2);
    const MetricField model = model_metric_field(spec);
    for (int trial = 0; trial < 100; ++trial) {
        check_riemann_identities(flat, random_vec(rng, 3), 1e-9);
        check_riemann_identities(sphere, random_vec(rng, 3, 0.3), 1e-9);
        check_riemann_identities(hyper, random_vec(rng, 3, 0.3), 1e-9);
        Vec p = random_vec(rng, 4, 0.1);
        if (!model.contains(p)) p.setZero();
        check_riemann_identities(model, p, 1e-9);
    }
    // FiniteDifference scheme obeys the looser tolerance.
    MetricField sphere_fd = sphere;
    sphere_fd.scheme = DerivScheme::FiniteDifference;
    check_riemann_identities(sphere_fd, vec({0.1, -0.2, 0.3}), 1e-4);
}

TEST_CASE("sectional curvature values") {
    const MetricField flat = euclidean_metric(4);
    const MetricField sphere = constant_curvature_metric(4, 1.0);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec p = random_vec(rng, 4, 0.3);
        const Vec u = random_vec(rng, 4);
        const Vec v = random_vec(rng, 4);
        CHECK(sectional(flat, p, u, v) == doctest::Approx(0.0).scale(1.0));
        CHECK(sectional(sphere, p, u, v) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Plane invariance: replace (u, v) by another basis of the same plane.
    const Vec p = vec({0.1, 0.2, -0.1, 0.05});
    const Vec u = vec({1.0, 0.3, 0.0, -0.2});
    const Vec v = vec({0.0, 1.0, 0.5, 0.1});
    const double s1 = sectional(sphere, p, u, v);
    const double s2 = sectional(sphere, p, 2.0 * u + v, u - 0.5 * v);
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-10));
    CHECK_THROWS_AS(sectional(sphere, p, u, 2.0 * u), DegeneratePlane);
}

TEST_CASE("degenerate metric detection") {
    MetricField g;
    g.dim = 2;
    g.eval = [](const Vec&) {
        Mat m(2, 2);
        m << 1.0, 2.0, 2.0, 1.0;  // indefinite
        return m;
    };
    CHECK_THROWS_AS(christoffel(g, Vec::Zero(2)), DegenerateMetric);
}

TEST_CASE("ric_k on flat space and sphere") {
    std::mt19937_64 rng(17);
    const MetricField flat = euclidean_metric(5);
    const MetricField sphere = constant_curvature_metric(5, 1.0);
    for (int k = 1; k <= 4; ++k) {
        const Vec p = random_vec(rng, 5, 0.2);
        std::vector<Vec> V;
        for (int i = 0; i <= k; ++i) V.push_back(random_vec(rng, 5));
        const Vec u = V[0];
        CHECK(ric_k(flat, p, u, V, k) == doctest::Approx(0.0).scale(1.0));
        CHECK(ric_k(sphere, p, u, V, k) == doctest::Approx(double(k)).epsilon(1e-9));
    }
}

TEST_CASE("ric_k error conditions") {
    const MetricField sphere = constant_curvature_metric(4, 1.0);
    const Vec p = Vec::Zero(4);
    std::vector<Vec> V = {vec({1, 0, 0, 0}), vec({0, 1, 0, 0})};
    // u outside span(V)
    CHECK_THROWS_AS(ric_k(sphere, p, vec({0, 0, 1, 0}), V, 1), VectorOutsideSubspace);
    // span too small for k = 2
    CHECK_THROWS_AS(ric_k(sphere, p, vec({1, 0, 0, 0}), V, 2), BadSubspaceDim);
}

TEST_CASE("ric_k is basis independent") {
    const ModelSpec spec = build_model(5, 2);
    const MetricField g = model_metric_field(spec);
    const PointCurvature pc = PointCurvature::at(g, Vec::Zero(5));
    const Frame K = model_killing_frame(spec);
    const Vec u = (K.vectors[0] + 0.5 * K.vectors[1] + 0.25 * K.vectors[2]).eval();
    std::vector<Vec> V = {K.vectors[0], K.vectors[1], K.vectors[2]};
    const double base_val = pc.ric_k(u, V, 2);
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        // Random invertible recombination spanning the same subspace.
        Mat M(3, 3);
        do {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M(i, j) = random_vec(rng, 1)[0];
        } while (std::abs(M.determinant()) < 0.1);
        std::vector<Vec> W;
        for (int i = 0; i < 3; ++i) {
            Vec w = Vec::Zero(5);
            for (int j = 0; j < 3; ++j) w += M(i, j) * V[j];
            W.push_back(w);
        }
        CHECK(pc.ric_k(u, W, 2) == doctest::Approx(base_val).epsilon(1e-9));
    }
}

TEST_CASE("Ric_1 equals sectional and Ric_{d-1} matches the Ricci operator") {
    const ModelSpec spec = build_model(4, 2);
    const MetricField g = model_metric_field(spec);
    const PointCurvature pc = PointCurvature::at(g, Vec::Zero(4));
    const Frame K = model_killing_frame(spec);
    const Vec& u = K.vectors[0];
    std::vector<Vec> pair = {K.vectors[0], K.vectors[1]};
    CHECK(pc.ric_k(u, pair, 1) ==
          doctest::Approx(pc.sectional(u, K.vectors[1])).epsilon(1e-12));

    const int d = static_cast<int>(K.vectors.size());
    const Mat M = restricted_ricci_operator(pc, K);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Vec c = random_vec(rng, d);
        c.normalize();
        Vec amb = Vec::Zero(4);
        for (int i = 0; i < d; ++i) amb += c[i] * K.vectors[i];
        CHECK(pc.ric_k(amb, K.vectors, d - 1) ==
              doctest::Approx(c.dot(M * c)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("restricted operators on flat space and sphere") {
    const MetricField flat = euclidean_metric(4);
    const Vec p = Vec::Zero(4);
    std::vector<Vec> basis;
    for (int i = 0; i < 4; ++i) {
        Vec e = Vec::Zero(4);
        e[i] = 1.0;
        basis.push_back(e);
    }
    Frame K = orthonormalize(flat.value(p), p, basis);
    CHECK(restricted_ricci_operator(flat, p, K).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(restricted_curvature_operator(flat, p, K).cwiseAbs().maxCoeff() < 1e-12);

    const MetricField sphere = constant_curvature_metric(4, 1.0);
    const Vec q = vec({0.2, -0.1, 0.3, 0.0});
    Frame S = orthonormalize(sphere.value(q), q, basis);
    const Mat ric = restricted_ricci_operator(sphere, q, S);
    CHECK((ric - 3.0 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
    const Mat op = restricted_curvature_operator(sphere, q, S);
    CHECK((op - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-9);

    Frame bad = S;
    bad.vectors[0] *= 2.0;
    CHECK_THROWS_AS(restricted_ricci_operator(sphere, q, bad), FrameNotOrthonormal);
}

TEST_CASE("orthonormalize builds orthonormal frames and rejects bad input") {
    const MetricField sphere = constant_curvature_metric(3, 1.0);
    const Vec p = vec({0.1, 0.4, -0.2});
    const Mat gp = sphere.value(p);
    std::mt19937_64 rng(29);
    std::vector<Vec> raw;
    for (int i = 0; i < 3; ++i) raw.push_back(random_vec(rng, 3));
    Frame F = orthonormalize(gp, p, raw);
    CHECK(F.vectors.size() == 3);
    CHECK(is_orthonormal(gp, F));

    // Nearly dependent pair: condition number above 1e8.
    std::vector<Vec> bad = {vec({1, 0, 0}), vec({1, 1e-6, 0})};
    CHECK_THROWS_AS(orthonormalize(Mat::Identity(3, 3), Vec::Zero(3), bad),
                    FrameNotOrthonormal);
}

TEST_CASE("lie derivative of the metric") {
    const MetricField flat = euclidean_metric(3);
    const Vec p = vec({0.5, -0.3, 1.0});
    auto translation = [](const Vec&) { return vec({1.0, 0.0, 0.0}); };
    CHECK(lie_derivative_metric(flat, translation, p).cwiseAbs().maxCoeff() < 1e-10);

    auto radial = [](const Vec& q) { return vec({q[0], 0.0, 0.0}); };
    const Mat L = lie_derivative_metric(flat, radial, p);
    Mat expect = Mat::Zero(3, 3);
    expect(0, 0) = 2.0;
    CHECK((L - expect).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sampled Ric monotonicity in k") {
    // If min sampled Ric_k > 0 then extending the same subspaces keeps
    // Ric_{k+1} > 0 (sphere and model corpus).
    const ModelSpec spec = build_model(6, 2);  // d = 4, Ric_2 > 0 on span K
    const MetricField g = model_metric_field(spec);
    const PointCurvature pc = PointCurvature::at(g, Vec::Zero(6));
    const Frame K = model_killing_frame(spec);
    std::mt19937_64 rng(31);
    double min_k = 1e300, min_k1 = 1e300;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec> V;
        for (int i = 0; i < 4; ++i) {
            Vec w = Vec::Zero(6);
            const Vec c = random_vec(rng, 4);
            for (int j = 0; j < 4; ++j) w += c[j] * K.vectors[j];
            V.push_back(w);
        }
        const std::vector<Vec> V3(V.begin(), V.begin() + 3);
        const Vec u = V[0];
        min_k = std::min(min_k, pc.ric_k(u, V3, 2));
        min_k1 = std::min(min_k1, pc.ric_k(u, V, 3));
    }
    CHECK(min_k > 0.0);
    CHECK(min_k1 > 0.0);
}
