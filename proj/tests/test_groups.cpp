#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace adskit;

namespace {

Mat2 hyp(double l, double angle = 0) {
    return rotation(angle) * Mat2{std::exp(l / 2), 0, 0, std::exp(-l / 2)} * rotation(-angle);
}

GroupSpec diagonal_schottky(int len) {
    Mat2 a = hyp(3), b = hyp(3, kPi / 4);
    GroupSpec s;
    s.generators = {make_isometry(a, a), make_isometry(b, b)};
    s.max_word_length = len;
    return s;
}

// boundary angle of a point of the upper half-plane close to the real line
double boundary_angle(std::complex<double> z) {
    double t = std::atan2(1.0, z.real());
    return t >= kPi ? t - kPi : t;
}

double directed_hausdorff(const std::vector<Rp1Pair>& from, const std::vector<Rp1Pair>& to) {
    double worst = 0;
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) best = std::min(best, rp1pair_distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST(Words, OneGenerator) {
    GroupSpec s;
    s.generators = {make_isometry(hyp(1), hyp(2))};
    s.max_word_length = 3;
    auto w = enumerate_words(s);
    ASSERT_EQ(w.size(), 7u);
    std::set<std::string> names;
    for (const auto& x : w) names.insert(word_string(x.letters));
    EXPECT_EQ(names.size(), 7u);
}

TEST(Words, FreeGroupCount) {
    for (int len = 1; len <= 6; ++len) {
        std::size_t expect = 1, level = 4;
        for (int i = 1; i <= len; ++i, level *= 3) expect += level;
        EXPECT_EQ(enumerate_words(diagonal_schottky(len)).size(), expect) << len;
    }
}

TEST(Words, NoIdentityCollision) {
    auto w = enumerate_words(diagonal_schottky(6));
    for (const auto& x : w) {
        if (x.letters.empty()) continue;
        EXPECT_GT(max_abs_diff(x.g.gl, Mat2::identity()), 1e-6);
    }
}

TEST(Screen, Examples) {
    EXPECT_EQ(screen_admissible(diagonal_schottky(5)).verdict, ScreenVerdict::ADMISSIBLE_CANDIDATE);
    GroupSpec ell;
    ell.generators = {make_isometry(hyp(2), hyp(2)), make_isometry(rotation(std::sqrt(2.0)), rotation(std::sqrt(2.0)))};
    ell.max_word_length = 3;
    auto r = screen_admissible(ell);
    EXPECT_EQ(r.verdict, ScreenVerdict::REJECTED);
    EXPECT_FALSE(r.witness_word.empty());
    GroupSpec trans;
    trans.generators = {make_isometry(hyp(1.5), Mat2::identity())};
    trans.max_word_length = 6;
    EXPECT_EQ(screen_admissible(trans).verdict, ScreenVerdict::ADMISSIBLE_CANDIDATE);
    GroupSpec unsync;
    unsync.generators = {make_isometry(hyp(1), hyp(2), 1)};
    unsync.max_word_length = 2;
    EXPECT_EQ(screen_admissible(unsync).verdict, ScreenVerdict::REJECTED);
}

TEST(LimitSet, CyclicHasTwoPoints) {
    GroupSpec s;
    s.generators = {make_isometry(hyp(1.2, 0.3), hyp(0.8, 1.1))};
    s.max_word_length = 8;
    auto ls = limit_set(s);
    ASSERT_EQ(ls.pairs.size(), 2u);
    auto fl = fixed_points(s.generators[0].gl), fr = fixed_points(s.generators[0].gr);
    std::vector<Rp1Pair> expect = {{fl.attractive, fr.attractive}, {fl.repulsive, fr.repulsive}};
    EXPECT_LT(directed_hausdorff(ls.pairs, expect), 1e-9);
    EXPECT_LT(directed_hausdorff(expect, ls.pairs), 1e-9);
}

TEST(LimitSet, DiagonalMatchesFuchsianOrbit) {
    auto spec = diagonal_schottky(6);
    auto ls = limit_set(spec);
    for (const auto& p : ls.pairs) EXPECT_LT(rp1_distance(p.l, p.r), 1e-9);
    std::vector<Rp1Pair> oracle_pts;
    for (auto z : oracle::fuchsian_orbit({hyp(3), hyp(3, kPi / 4)}, 6)) {
        if (z.imag() > 1e-6 * (1 + std::norm(z))) continue;
        double t = boundary_angle(z);
        oracle_pts.push_back({t, t});
    }
    ASSERT_GT(oracle_pts.size(), 1000u);
    EXPECT_LT(directed_hausdorff(ls.pairs, oracle_pts), 2 * spec.dedup);
    EXPECT_LT(directed_hausdorff(oracle_pts, ls.pairs), 2 * spec.dedup);
}

TEST(LimitSet, ConjugatedRightFactor) {
    Mat2 c{1.3, 0.4, -0.2, (1 - 0.4 * 0.2) / 1.3};
    auto diag = diagonal_schottky(5);
    GroupSpec conj = diag;
    for (auto& g : conj.generators) g = make_isometry(g.gl, c * g.gr * c.adj());
    auto a = limit_set(diag), b = limit_set(conj);
    std::vector<Rp1Pair> image;
    for (const auto& p : a.pairs) image.push_back({p.l, act_on_line(c, p.r)});
    EXPECT_LT(directed_hausdorff(b.pairs, image), 2 * diag.dedup);
    EXPECT_LT(directed_hausdorff(image, b.pairs), 2 * diag.dedup);
}

TEST(LimitSet, NoProximalElement) {
    GroupSpec s;
    s.generators = {make_isometry(hyp(1), Mat2::identity())};
    s.max_word_length = 3;
    try {
        limit_set(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoProximalElement);
    }
}

TEST(Positivity, DiagonalAndAntiConjugate) {
    auto spec = diagonal_schottky(6);
    auto ls = limit_set(spec);
    auto pos = positivity_classify(ls);
    EXPECT_EQ(pos.verdict, Positivity::ADMISSIBLE_POSITIVE);
    for (std::size_t i = 0; i < pos.lifts.size(); i += 7)
        for (std::size_t j = 0; j < pos.lifts.size(); j += 5) EXPECT_LE(q_pair(pos.lifts[i], pos.lifts[j]), 1e-9);

    Eigen::Matrix4d S = anti_isometry_sigma();
    EXPECT_TRUE((S * S).isIdentity());
    std::vector<Eigen::Matrix4d> gens;
    for (const auto& g : spec.generators) gens.push_back(S * to_matrix4(g) * S);
    auto pts = projective_limit_set(gens, 6, spec.dedup);
    EXPECT_EQ(positivity_classify(pts).verdict, Positivity::MINUS_ADMISSIBLE);
}

TEST(Positivity, Mixed) {
    std::vector<Vec22> rays;
    for (double t : {0.0, 0.7, 1.9, 2.6}) rays.push_back(rp1pair_to_ein2({t, std::fmod(3 * t, kPi)}).rep);
    EXPECT_EQ(positivity_classify(rays).verdict, Positivity::MIXED);
}

TEST(Invariance, Diagonal) {
    auto spec = diagonal_schottky(8);
    auto ls = limit_set(spec);
    auto r = invariance_check(spec, ls, 3 * spec.dedup);
    EXPECT_EQ(r.misses, 0u);
    EXPECT_EQ(r.checked, 4 * ls.pairs.size());
}

TEST(Minimality, OrbitsRecoverSample) {
    auto spec = diagonal_schottky(6);
    auto ls = limit_set(spec);
    auto f = fixed_points(spec.generators[0].gl);
    auto m = minimality_probe(spec, ls, {f.repulsive, f.repulsive}, 3 * spec.dedup);
    EXPECT_TRUE(m.pass) << m.coverage;

    GroupSpec cyc;
    cyc.generators = {make_isometry(hyp(1.0, 0.2), hyp(1.4, 0.9))};
    cyc.max_word_length = 40;
    auto c = limit_set(cyc);
    auto fl = fixed_points(cyc.generators[0].gl), fr = fixed_points(cyc.generators[0].gr);
    Rp1Pair seed{fl.attractive + 0.3, fr.attractive - 0.5};
    std::vector<Rp1Pair> orbit;
    for (const auto& w : enumerate_words(cyc)) orbit.push_back(act_on_boundary(w.g, seed));
    int near = 0;
    for (const auto& p : orbit) near += directed_hausdorff({p}, c.pairs) < 1e-3;
    // all but a bounded number of iterates lie near the two fixed points
    EXPECT_GE(near, static_cast<int>(orbit.size()) - 30);
}

TEST(Handoff, InvisibleOfLimitSet) {
    auto s = invisible_of_limit_set(diagonal_schottky(4));
    EXPECT_GT(s.size(), 10u);
    GroupSpec bad;
    bad.generators = {make_isometry(hyp(2), hyp(2)), make_isometry(hyp(2, kPi / 4), hyp(2, 1.0))};
    bad.max_word_length = 5;
    EXPECT_NO_THROW({
        try {
            invisible_of_limit_set(bad);
        } catch (const Error& e) {
            EXPECT_TRUE(e.code() == ErrorCode::NotPositive || e.code() == ErrorCode::NotAchronal);
        }
    });
}
