#include <gtest/gtest.h>

#include <random>

#include "adskit/hull.hpp"
#include "adskit/lp.hpp"
#include "adskit/quadspace.hpp"

using namespace adskit;

namespace {

Vec22 random_vec(std::mt19937_64& rng) {
    std::normal_distribution<double> N(0, 1);
    return {N(rng), N(rng), N(rng), N(rng)};
}

} // namespace

TEST(QForm, BasisValues) {
    EXPECT_EQ(q_form({1, 0, 0, 0}), -1);
    EXPECT_EQ(q_form({1, 0, 1, 0}), 0);
    EXPECT_EQ(q_form({0, 0, 1, 1}), 2);
}

TEST(QPair, OppositeBoundaryPair) { EXPECT_DOUBLE_EQ(q_pair({1, 0, 1, 0}, {1, 0, -1, 0}), -2); }

TEST(QPair, MatchesExpansion) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        Vec22 p = random_vec(rng), q = random_vec(rng);
        double e = -p.u * q.u - p.v * q.v + p.x1 * q.x1 + p.x2 * q.x2;
        EXPECT_NEAR(q_pair(p, q), e, 1e-14 * (1 + std::abs(e)));
        EXPECT_NEAR(q_pair(p, p), q_form(p), 1e-14 * (1 + std::abs(q_form(p))));
    }
}

TEST(Flat, RoundTripAndNorm) {
    Covector f = flat({1, 0, 0, 0});
    EXPECT_EQ(f.c[0], -1);
    EXPECT_EQ(f.c[1], 0);
    std::mt19937_64 rng(2);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        Vec22 p = random_vec(rng);
        worst = std::max(worst, euclid_norm(sharp(flat(p)) - p));
        EXPECT_NEAR(q_dual(flat(p)), q_form(p), 1e-13);
    }
    EXPECT_LT(worst, 1e-13);
}

TEST(ClassifyRay, Classes) {
    auto a = classify_ray({2, 0, 0, 0});
    EXPECT_EQ(a.cls, RayClass::ADS_INTERIOR);
    EXPECT_NEAR(euclid_norm(a.rep - Vec22{1, 0, 0, 0}), 0, 1e-15);
    EXPECT_EQ(classify_ray({1, 0, 1, 0}).cls, RayClass::EIN2);
    EXPECT_EQ(classify_ray({0, 0, 1, 0}).cls, RayClass::EXTERIOR);
    EXPECT_THROW(classify_ray({0, 0, 0, 0}), Error);
}

TEST(ClassifyRay, UnitRepAndAntipode) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        SPoint s = classify_ray(random_vec(rng));
        EXPECT_NEAR(euclid_norm(s.rep), 1, 1e-12);
        EXPECT_EQ(euclid_norm(antipode(s).rep + s.rep), 0);
    }
}

TEST(MatrixModel, DeterminantIsMinusQ) {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 200; ++k) {
        Vec22 p = random_vec(rng);
        EXPECT_NEAR(-to_matrix(p).det(), q_form(p), 1e-12);
        EXPECT_NEAR(euclid_norm(from_matrix(to_matrix(p)) - p), 0, 1e-14);
    }
}

TEST(DualConvex, PairingArithmetic) {
    auto d = dual_convex({classify_ray({1, 0, 1, 0}), classify_ray({1, 0, -1, 0})});
    EXPECT_TRUE(d.contains({1, 0, 0, 0}));
    EXPECT_FALSE(d.contains({1, 0, 1, 0}));
}

TEST(Hull, Tetrahedron) {
    std::vector<SPoint> pts = {classify_ray({1, 0, 0.3, 0}), classify_ray({1, 0, -0.2, 0.2}),
                               classify_ray({1, 0.2, 0, -0.3}), classify_ray({1, -0.25, 0.1, 0.1})};
    auto ph = convex_hull_patch(pts, SPoint{{1, 0, 0, 0}, RayClass::ADS_INTERIOR});
    EXPECT_EQ(ph.hull.dim, 3);
    EXPECT_EQ(ph.hull.facets.size(), 4u);
    Vec22 bary{};
    for (const auto& p : pts) bary += p.rep;
    pts.push_back(classify_ray(bary));
    auto ph2 = convex_hull_patch(pts, SPoint{{1, 0, 0, 0}, RayClass::ADS_INTERIOR});
    EXPECT_FALSE(ph2.hull.is_vertex(4));
    EXPECT_EQ(ph2.hull.vertices.size(), 4u);
}

TEST(Hull, MembershipMatchesLp) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-0.4, 0.4);
    std::vector<SPoint> pts;
    std::vector<std::vector<double>> coords;
    SPoint center{{1, 0, 0, 0}, RayClass::ADS_INTERIOR};
    for (int i = 0; i < 20; ++i) pts.push_back(classify_ray({1, U(rng), U(rng), U(rng)}));
    auto ph = convex_hull_patch(pts, center);
    for (const auto& p : pts) {
        Vec3 y = ph.to_patch(p.rep);
        coords.push_back({y[0], y[1], y[2]});
    }
    int disagree = 0, near = 0;
    for (int k = 0; k < 10000; ++k) {
        Vec22 q{1, U(rng), U(rng), U(rng)};
        Vec3 y = ph.to_patch(q);
        bool lp = lp_in_convex_hull(coords, {y[0], y[1], y[2]}, 1e-9);
        double margin = -std::numeric_limits<double>::infinity();
        for (const auto& f : ph.hull.facets) margin = std::max(margin, f.normal.dot(y) - f.offset);
        if (std::abs(margin) < 1e-7) {
            ++near;
            continue;
        }
        if (lp != ph.contains(q)) ++disagree;
    }
    EXPECT_EQ(disagree, 0);
    EXPECT_LT(near, 10);
}

TEST(Hull, FacetDualsMatchDualConvex) {
    // the dual cone is generated by the facet duals; every strict positive combination lies inside
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(0, 2 * 3.141592653589793);
    std::vector<SPoint> pts;
    for (int i = 0; i < 10; ++i) {
        double a = U(rng);
        pts.push_back(classify_ray({1, 0, 0.5 * std::cos(a), 0.5 * std::sin(a)}));
        pts.push_back(classify_ray({1, 0.3 * std::cos(a), 0.2 * std::sin(a), 0}));
    }
    auto ph = convex_hull_patch(pts, SPoint{{1, 0, 0, 0}, RayClass::ADS_INTERIOR});
    auto d = dual_convex(pts);
    std::uniform_real_distribution<double> W(0.1, 1);
    for (int k = 0; k < 200; ++k) {
        Vec22 l{};
        for (const auto& f : ph.hull.facets) l += W(rng) * ph.facet_dual(f);
        EXPECT_TRUE(d.contains(l, 1e-12));
    }
    for (const auto& f : ph.hull.facets) EXPECT_LE(d.margin(ph.facet_dual(f)), 1e-12);
}
