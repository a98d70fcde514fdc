#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace adskit;

namespace {

std::vector<ConfPoint> circle_sample(int n, double amp, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<ConfPoint> pts;
    for (int i = 0; i < n; ++i) {
        double phi = kTwoPi * (i + 0.4 * U(rng)) / n;
        pts.push_back(conf_boundary(phi, amp * std::sin(2 * phi) + 0.5 * amp * std::cos(phi)));
    }
    return pts;
}

} // namespace

TEST(CausallyRelated, Trivial) {
    ConfPoint p = conf_polar(0.4, 1.0, 0.3);
    auto v = causally_related(p, p);
    EXPECT_TRUE(v.related);
    EXPECT_FALSE(v.strict);
    auto w = causally_related({kPole, 0}, conf_polar(kPi / 2 - 1e-12, 0.0, kPi / 2));
    EXPECT_TRUE(w.related);
    EXPECT_FALSE(w.strict);
    EXPECT_EQ(w.time_sign, TimeSign::FUTURE);
}

TEST(CausallyRelated, GridPathOracle) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0, 1);
    const int S = 20, T = 10;
    std::vector<S2> pts;
    for (int i = 0; i < S * (T + 1); ++i) pts.push_back(random_hemisphere(rng));
    oracle::HemisphereGraph G(0.01, 0.05, pts);
    int disagree = 0;
    for (int s = 0; s < S; ++s) {
        std::vector<std::size_t> tg;
        for (int k = 0; k < T; ++k) tg.push_back(G.extra_index(S + s * T + k));
        auto d = G.distances(G.extra_index(s), tg);
        for (int k = 0; k < T; ++k) {
            double dt = 3 * (2 * U(rng) - 1);
            ConfPoint p{pts[s], 0}, q{pts[S + s * T + k], dt};
            bool oracle_related = d[k] <= std::abs(dt);
            if (std::abs(d[k] - std::abs(dt)) < 0.02) continue;
            if (oracle_related != causally_related(p, q).related) ++disagree;
        }
    }
    EXPECT_EQ(disagree, 0);
}

TEST(CertifyAchronal, OppositePair) {
    auto s = certify_achronal({conf_boundary(0, 0), conf_boundary(kPi, 0)});
    EXPECT_TRUE(s.strict);
    EXPECT_TRUE(s.generic);
    EXPECT_NEAR(q_pair(boundary_unit_rep(s.points[0]), boundary_unit_rep(s.points[1])) * 2, -2, 1e-15);
}

TEST(CertifyAchronal, NullPair) {
    auto s = certify_achronal({conf_boundary(0, 0), conf_boundary(1, 1)});
    EXPECT_FALSE(s.strict);
    EXPECT_TRUE(s.generic);
}

TEST(CertifyAchronal, TimelikePairRejected) {
    ConfPoint a = conf_boundary(0, 0), b = conf_boundary(1, 1.2);
    // oracle: conformal chart verdict
    EXPECT_TRUE(causally_related(a, b).strict);
    try {
        certify_achronal({a, b});
        FAIL() << "expected NotAchronal";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAchronal);
    }
}

TEST(CertifyAchronal, InputChecks) {
    EXPECT_THROW(certify_achronal({conf_boundary(0, 0)}), Error);
    EXPECT_THROW(certify_achronal({conf_boundary(0, 0), conf_polar(0.3, 0, 0)}), Error);
}

TEST(PureLightlike, OppositePointsAndCone) {
    std::vector<ConfPoint> pts = {conf_boundary(0, 0), conf_boundary(kPi, kPi), conf_boundary(1, 1),
                                  conf_boundary(-2, 2)};
    auto s = certify_achronal(pts);
    EXPECT_TRUE(is_pure_lightlike(s));
    for (std::size_t i = 2; i < 4; ++i) {
        EXPECT_NEAR(s.pairing(0, i), 0, 1e-12);
        EXPECT_NEAR(s.pairing(1, i), 0, 1e-12);
    }
    pts[1].theta = kPi - 0.01;
    auto t = certify_achronal(pts);
    EXPECT_FALSE(is_pure_lightlike(t));
    EXPECT_FALSE(is_pure_lightlike(certify_achronal({conf_boundary(0, 0), conf_boundary(2, 0.1)})));
}

TEST(Strictness, StrictCircleAllVertices) {
    auto s = certify_achronal(circle_sample(12, 0.2, 3));
    ASSERT_TRUE(s.strict);
    auto r = strictness_by_extreme_points(s);
    EXPECT_TRUE(r.hull_checked);
    EXPECT_TRUE(r.hull_strict);
    EXPECT_TRUE(r.non_vertices.empty());
    EXPECT_TRUE(r.agree);
}

TEST(Strictness, NullPairDetected) {
    auto pts = circle_sample(10, 0.1, 4);
    // replace one point by one lightlike to its neighbour
    double phi = conf_phi(pts[0]) + 0.3;
    pts[1] = conf_boundary(phi, pts[0].theta + 0.3);
    auto s = certify_achronal(pts);
    EXPECT_FALSE(s.strict);
    auto r = strictness_by_extreme_points(s);
    EXPECT_TRUE(r.agree);
    EXPECT_FALSE(r.hull_strict);
}

TEST(Strictness, LightlikeTriple) {
    auto s = certify_achronal({conf_boundary(0, 0), conf_boundary(0.5, 0.5), conf_boundary(1.2, 1.2)});
    EXPECT_FALSE(s.strict);
    EXPECT_FALSE(strictness_by_extreme_points(s).hull_strict);
}

TEST(Elementary, Kinds) {
    EXPECT_EQ(classify_elementary(certify_achronal({conf_boundary(0, 0), conf_boundary(2, 0.3)})).kind,
              Elementary::SPLITTING);
    EXPECT_EQ(classify_elementary(
                  certify_achronal({conf_boundary(0, 0), conf_boundary(0.5, 0.5), conf_boundary(1.2, 1.2)}))
                  .kind,
              Elementary::EXTREME);
    EXPECT_EQ(classify_elementary(certify_achronal(circle_sample(12, 0.2, 5))).kind, Elementary::NONELEMENTARY);
    // three points on the future cone of (0, 0): the cone apex is their only common past point
    auto c = classify_elementary(
        certify_achronal({conf_boundary(1, 1), conf_boundary(-1, 1), conf_boundary(2.5, 2.5)}));
    EXPECT_EQ(c.kind, Elementary::CONICAL);
}

TEST(Elementary, CircleHasEmptyCommonCones) {
    // direct lightcone search: no boundary point is lightlike to all points
    auto s = certify_achronal(circle_sample(12, 0.2, 6));
    auto r = classify_elementary(s);
    EXPECT_TRUE(r.future.arcs.empty());
    EXPECT_TRUE(r.past.arcs.empty());
    int hits = 0;
    for (int k = 0; k < 3600; ++k) {
        double phi = kTwoPi * k / 3600;
        for (double sign : {-1.0, 1.0}) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : s.points) {
                double h = p.theta + sign * circle_distance(phi, conf_phi(p));
                lo = std::min(lo, h);
                hi = std::max(hi, h);
            }
            if (hi - lo < 1e-3) ++hits;
        }
    }
    EXPECT_EQ(hits, 0);
}
