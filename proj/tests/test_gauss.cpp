#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace adskit;

namespace {

Mat2 expm(const Mat2& m) {
    Mat2 r = Mat2::identity(), t = Mat2::identity();
    for (int i = 1; i < 30; ++i) {
        t = (1.0 / i) * (t * m);
        r = r + t;
    }
    return r;
}

struct Sampler {
    std::mt19937_64 rng;
    std::normal_distribution<double> N{0, 1};
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    Mat2 sl2() { double a = N(rng), b = N(rng), c = N(rng); return {a, b, c, -a}; }
    AdsIsometry iso(double s = 0.5) { return make_isometry(expm(s * sl2()), expm(s * sl2())); }
    TPoint point() {
        TPoint p = act_on_tpoint(iso(), base_tpoint());
        return make_tpoint(p.x, p.y, 1e-8);
    }
    TTangent tangent(const TPoint& p) { return tangent_from_algebra(p, sl2(), sl2()); }
};

double h2_distance(Cplx a, Cplx b) {
    return std::acosh(1 + std::norm(a - b) / (2 * a.imag() * b.imag()));
}

std::vector<ConfPoint> wavy_circle(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<ConfPoint> pts;
    for (int i = 0; i < n; ++i) {
        double ph = kTwoPi * (i + 0.4 * U(rng)) / n;
        pts.push_back(conf_boundary(ph, 0.3 * std::sin(2 * ph) + 0.2 * std::cos(ph)));
    }
    return pts;
}

} // namespace

TEST(TNorm, Examples) {
    TPoint b = base_tpoint();
    double al = 0.7, et = -0.3, nu = 1.1, et2 = 0.4, nu2 = -0.9;
    TTangent t{{0, al, et, nu}, {-al, 0, et2, nu2}};
    EXPECT_NEAR(t_norm(b, t), -al * al / 2 + 0.25 * (et * et + nu * nu + et2 * et2 + nu2 * nu2), 1e-15);
    EXPECT_EQ(t_norm(b, {}), 0.0);
    EXPECT_NEAR(t_norm(b, flow_field(b)), -0.5, 1e-15);
    Sampler S(61);
    for (int k = 0; k < 100; ++k) {
        TPoint p = S.point();
        EXPECT_NEAR(t_norm(p, flow_field(p), 1e-8), -0.5, 1e-9);
    }
    try {
        t_norm(b, {{1, 0, 0, 0}, {}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConstraintViolation);
    }
}

TEST(TPoint, Components) {
    EXPECT_EQ(make_tpoint({1, 0, 0, 0}, {0, 1, 0, 0}).component, Component::FUTURE);
    EXPECT_EQ(make_tpoint({1, 0, 0, 0}, {0, -1, 0, 0}).component, Component::PAST);
    EXPECT_THROW(make_tpoint({1, 0, 0, 0}, {1, 0, 0, 0}), Error);
}

TEST(Flow, Examples) {
    Sampler S(62);
    for (int k = 0; k < 50; ++k) {
        TPoint p = S.point();
        TPoint q = gauss_flow(0, p);
        EXPECT_LT(euclid_norm(q.x - p.x) + euclid_norm(q.y - p.y), 1e-15);
        TPoint r = gauss_flow(kPi / 2, p);
        EXPECT_LT(euclid_norm(r.x - p.y) + euclid_norm(r.y + p.x), 1e-14);
    }
}

TEST(Flow, IsometricAndPreservesConstraints) {
    Sampler S(63);
    std::uniform_real_distribution<double> T(-4, 4);
    double worst = 0, defect = 0;
    for (int k = 0; k < 10000; ++k) {
        TPoint p = S.point();
        TTangent v = S.tangent(p);
        double t = T(S.rng), h = 1e-4;
        // finite-difference pushforward along the straight chord
        TPoint a = gauss_flow(t, {p.x + h * v.u, p.y + h * v.v, p.component});
        TPoint b = gauss_flow(t, {p.x - h * v.u, p.y - h * v.v, p.component});
        TTangent w{(a.x - b.x) / (2 * h), (a.y - b.y) / (2 * h)};
        TPoint q = gauss_flow(t, p);
        double n0 = t_norm(p, v, 1e-8), n1 = t_norm(q, w, 1e-8);
        worst = std::max(worst, std::abs(n1 - n0) / (1 + std::abs(n0)));
        defect = std::max({defect, std::abs(q_form(q.x) + 1), std::abs(q_form(q.y) + 1), std::abs(q_pair(q.x, q.y))});
        EXPECT_EQ(q.component, p.component);
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_LT(defect, 1e-10);
}

TEST(Flow, DiagonalActionPreservesConstraints) {
    Sampler S(64);
    double defect = 0;
    for (int k = 0; k < 1000; ++k) {
        TPoint q = act_on_tpoint(S.iso(0.3), S.point());
        defect = std::max({defect, std::abs(q_form(q.x) + 1), std::abs(q_form(q.y) + 1), std::abs(q_pair(q.x, q.y))});
        EXPECT_EQ(make_tpoint(q.x, q.y, 1e-8).component, Component::FUTURE);
    }
    EXPECT_LT(defect, 1e-10);
}

TEST(Projection, BasePointAndOrbit) {
    auto z = project_h2xh2(base_tpoint());
    EXPECT_LT(std::abs(z.left - Cplx(0, 1)) + std::abs(z.right - Cplx(0, 1)), 1e-15);
    for (double t = -3; t < 3; t += 0.37) {
        auto w = project_h2xh2(gauss_flow(t, base_tpoint()));
        EXPECT_LT(std::abs(w.left - Cplx(0, 1)) + std::abs(w.right - Cplx(0, 1)), 1e-12);
    }
    try {
        project_h2xh2(make_tpoint({1, 0, 0, 0}, {0, -1, 0, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DecompositionFailed);
    }
}

TEST(Projection, Equivariant) {
    Sampler S(65);
    for (int k = 0; k < 500; ++k) {
        TPoint p = S.point();
        AdsIsometry g = S.iso(0.4);
        auto z = project_h2xh2(p), w = project_h2xh2(act_on_tpoint(g, p));
        EXPECT_LT(std::abs(w.left - mobius(g.gl, z.left)), 1e-9);
        EXPECT_LT(std::abs(w.right - mobius(g.gr, z.right)), 1e-9);
        // independent of the point on the flow line
        auto f = project_h2xh2(gauss_flow(1.3 * k, p));
        EXPECT_LT(std::abs(f.left - z.left) + std::abs(f.right - z.right), 1e-9);
    }
}

TEST(Projection, SlBasisForms) {
    // at the base point, left factor [[a, b], [c, -a]], right factor trivial
    TPoint b = base_tpoint();
    std::mt19937_64 rng(66);
    std::normal_distribution<double> N(0, 1);
    for (int k = 0; k < 100; ++k) {
        double al = N(rng), be = N(rng), ga = N(rng);
        TTangent t = remove_flow_component(b, tangent_from_algebra(b, {al, be, ga, -al}, {0, 0, 0, 0}));
        double h = h2xh2_norm(b, t), n = t_norm(b, t);
        EXPECT_NEAR(n, al * al / 2 + (be + ga) * (be + ga) / 8, 1e-12);
        EXPECT_NEAR(h, (be + ga) * (be + ga) + 4 * al * al, 1e-11);
    }
}

TEST(Projection, HomothetyFactorEight) {
    Sampler S(67);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        TPoint p = S.point();
        TTangent t = remove_flow_component(p, S.tangent(p));
        worst = std::max(worst, std::abs(h2xh2_norm(p, t) / t_norm(p, t, 1e-8) - 8));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Projection, DifferentialMatchesFiniteDifference) {
    Sampler S(68);
    for (int k = 0; k < 200; ++k) {
        TPoint p = S.point();
        Mat2 A = S.sl2(), B = S.sl2();
        double h = 1e-6;
        auto at = [&](double s) {
            return project_h2xh2(act_on_tpoint(make_isometry(expm(s * A), expm(s * B)), p));
        };
        auto a = at(h), b = at(-h);
        auto d = project_differential(p, tangent_from_algebra(p, A, B));
        double scale = 1 + std::abs(d[0]) + std::abs(d[1]);
        EXPECT_LT(std::abs((a.left - b.left) / (2 * h) - d[0]) / scale, 1e-6);
        EXPECT_LT(std::abs((a.right - b.right) / (2 * h) - d[1]) / scale, 1e-6);
    }
}

TEST(GaussMap, TotallyGeodesicDisc) {
    for (double rho : {0.1, 0.6, 1.2})
        for (double phi : {0.0, 2.0, 4.0}) {
            TPoint p = gauss_map_graph([](const S2&) { return 0.0; }, conf_polar(rho, phi, 0).s);
            EXPECT_LT(euclid_norm(p.y - Vec22{0, 1, 0, 0}), 1e-8);
        }
    TriSurface disc;
    int n = 12;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) disc.vertices.push_back(conf_to_quadric(conf_polar(0.1 + 0.1 * i, kTwoPi * j / n, 0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int a = i * (n + 1) + j, b = a + 1, c = a + n + 1, d = c + 1;
            disc.triangles.push_back({a, b, c});
            disc.triangles.push_back({b, d, c});
        }
    for (const auto& p : gauss_map(disc)) EXPECT_LT(euclid_norm(p.y - Vec22{0, 1, 0, 0}), 1e-9);
}

TEST(GaussMap, NotSpacelike) {
    try {
        gauss_map_graph([](const S2& s) { return 2.0 * s[1]; }, conf_polar(0.2, 0, 0).s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSpacelike);
    }
}

TEST(GaussMap, ImageArcLengthMatchesProjection) {
    auto g = [](const S2& s) { return 0.25 * s[0] * s[1] + 0.15 * s[0] * s[0]; };
    int n = 1000;
    std::vector<TPoint> c;
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        c.push_back(gauss_map_graph(g, conf_polar(0.2 + 0.6 * t, 0.5 + 1.5 * t, 0).s));
    }
    double LT = 0, LG = 0, uv = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        Vec22 dx = c[i].x - c[i - 1].x, dy = c[i].y - c[i - 1].y;
        double q = 0.25 * (q_form(dx) + q_form(dy));
        ASSERT_GT(q, 0);
        LT += std::sqrt(q);
        auto a = project_h2xh2(c[i - 1]), b = project_h2xh2(c[i]);
        LG += std::hypot(h2_distance(a.left, b.left), h2_distance(a.right, b.right)) / std::sqrt(8.0);
        uv = std::min(uv, q_pair(dx, dy));
    }
    EXPECT_NEAR(LT / LG, 1, 1e-6);
}

TEST(GaussGraph, HullFacets) {
    std::mt19937_64 rng(69);
    auto s = certify_achronal(oracle::random_achronal(24, rng));
    auto h = hull_surfaces(s);
    auto lam = s.rays();
    std::vector<Vec22> xs, ys;
    for (std::size_t f = 0; f < h.duals.size(); ++f) {
        if (h.kind[f] != +1) continue;
        Vec22 x;
        for (int v : h.ph.hull.facets[f].verts) x += lam[v].rep;
        Vec22 y = h.duals[f];
        double side = 0;
        for (const auto& l : lam) side += q_pair(l.rep, y);
        if (side > 0) y = -1.0 * y;
        xs.push_back(x);
        ys.push_back(y);
    }
    ASSERT_GT(xs.size(), 3u);
    auto gg = gauss_graph_convex(xs, ys);
    for (std::size_t i = 0; i < gg.size(); ++i)
        for (std::size_t j = 0; j < gg.size(); ++j)
            EXPECT_GE(q_pair(gg[i].x - gg[j].x, gg[i].y - gg[j].y), -1e-12);
    EXPECT_GE(curve_uv_min(gg), -1e-12);
    for (auto& y : ys) y = -1.0 * y;
    try {
        gauss_graph_convex(xs, ys);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotConvex);
    }
}

TEST(Sigma, FlatCircle) {
    std::vector<ConfPoint> fl;
    for (int i = 0; i < 16; ++i) fl.push_back(conf_boundary(kTwoPi * i / 16, 0));
    auto s = certify_achronal(fl);
    SigmaMap sm(s);
    EXPECT_NEAR(sm.tau({kPole, -kPi / 4}), kPi / 4, 1e-9);
    auto lp = sm.level_point(kPole);
    ASSERT_TRUE(lp.has_value());
    EXPECT_NEAR(lp->theta, -kPi / 4, 1e-9);
    TPoint xy = sm.pair(conf_to_quadric(*lp));
    EXPECT_NEAR(xy.y.v, 0, 1e-12);
    EXPECT_NEAR(q_pair(xy.x, xy.y), 0, 1e-12);
    auto r = sigma_map_check(s, 200, 70);
    EXPECT_GT(r.paths, 150u);
    EXPECT_TRUE(r.pass());
    EXPECT_LE(r.max_ratio, 1 + 1e-6);
    EXPECT_LT(r.max_tau_gap, 1e-4);
}

TEST(Sigma, WavyCircle) {
    auto s = certify_achronal(wavy_circle(16, 71));
    auto r = sigma_map_check(s, 300, 72);
    EXPECT_GT(r.paths, 250u);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_GE(r.min_uv, -1e-6);
    EXPECT_LT(r.max_identity_error, 1e-12);
    EXPECT_LT(r.max_tau_gap, 1e-4);
}

TEST(Sigma, DualFormulaMatchesShooting) {
    auto s = certify_achronal(wavy_circle(12, 73));
    SigmaMap sm(s);
    const auto& e = sm.envelopes();
    std::mt19937_64 rng(74);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 10; ++k) {
        ConfPoint p = conf_polar(1.2 * std::sqrt(U(rng)), kTwoPi * U(rng), 0);
        double lo = e.f_minus(p.s), hi = e.f_plus(p.s);
        p.theta = lo + (0.05 + 0.5 * U(rng)) * (hi - lo);
        if (!sm.support(conf_to_quadric(p)).found) continue;
        EXPECT_NEAR(sm.tau(p), cosmological_time(e, p).tau_shooting, 1e-4);
    }
    // restricting supports to hull facets changes nothing
    SigmaMap full(build_envelopes(s));
    for (int k = 0; k < 500; ++k) {
        ConfPoint p = conf_polar(1.3 * std::sqrt(U(rng)), kTwoPi * U(rng), 0);
        double lo = e.f_minus(p.s), hi = e.f_plus(p.s);
        p.theta = lo + U(rng) * (hi - lo);
        EXPECT_NEAR(sm.tau(p), full.tau(p), 1e-12);
    }
}
