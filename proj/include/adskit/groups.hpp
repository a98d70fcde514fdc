#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causality.hpp"
#include "isometry.hpp"

namespace adskit {

struct GroupSpec {
    std::vector<AdsIsometry> generators;
    int max_word_length = 8;
    double dedup = 1e-4;
};

// letters: +(i+1) for generator i, -(i+1) for its inverse
struct Word {
    std::vector<int> letters;
    AdsIsometry g;
};

inline std::string word_string(const std::vector<int>& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) {
        s += static_cast<char>('a' + (std::abs(l) - 1));
        if (l < 0) s += '\'';
    }
    return s;
}

namespace detail {

// entries quantized relative to the scale; the scale itself keeps a^n and a^(n+1) apart
inline std::array<long long, 10> word_key(const AdsIsometry& g) {
    double scale = std::max(max_abs(g.gl), max_abs(g.gr));
    double q = 1e-9 * std::max(1.0, scale);
    auto r = [&](double x) { return static_cast<long long>(std::llround(x / q)); };
    return {r(g.gl.a), r(g.gl.b), r(g.gl.c), r(g.gl.d), r(g.gr.a), r(g.gr.b), r(g.gr.c), r(g.gr.d), g.k,
            std::llround(std::log(std::max(1.0, scale)) * 1e6)};
}

} // namespace detail

// Breadth-first enumeration of reduced words, merging near-duplicate elements.
inline std::vector<Word> enumerate_words(const GroupSpec& spec) {
    if (spec.generators.empty()) throw Error(ErrorCode::InvalidInput, "no generators");
    std::vector<int> letters;
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        letters.push_back(static_cast<int>(i) + 1);
        letters.push_back(-(static_cast<int>(i) + 1));
    }
    auto element = [&](int l) {
        const auto& g = spec.generators[std::abs(l) - 1];
        return l > 0 ? make_isometry(g.gl, g.gr, g.k) : inverse(make_isometry(g.gl, g.gr, g.k));
    };
    std::vector<Word> out;
    std::map<std::array<long long, 10>, std::size_t> seen;
    out.push_back({{}, identity_isometry()});
    seen[detail::word_key(out[0].g)] = 0;
    std::size_t level_begin = 0, level_end = 1;
    for (int len = 1; len <= spec.max_word_length; ++len) {
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (int l : letters) {
                const auto& w = out[i].letters;
                if (!w.empty() && w.back() == -l) continue;
                Word nw;
                nw.letters = w;
                nw.letters.push_back(l);
                nw.g = compose(out[i].g, element(l));
                auto key = detail::word_key(nw.g);
                if (seen.count(key)) continue;
                seen[key] = out.size();
                out.push_back(std::move(nw));
            }
        }
        level_begin = level_end;
        level_end = out.size();
    }
    return out;
}

enum class ScreenVerdict { ADMISSIBLE_CANDIDATE, REJECTED, INCONCLUSIVE };

inline const char* to_string(ScreenVerdict v) {
    switch (v) {
    case ScreenVerdict::ADMISSIBLE_CANDIDATE: return "ADMISSIBLE_CANDIDATE";
    case ScreenVerdict::REJECTED: return "REJECTED";
    case ScreenVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

struct ScreenReport {
    ScreenVerdict verdict = ScreenVerdict::ADMISSIBLE_CANDIDATE;
    std::string reason;
    std::size_t words = 0;
    bool abelian = false;
    bool left_hyperbolic = false, right_hyperbolic = false;
    std::string witness_word;
};

inline bool is_abelian(const GroupSpec& spec, double tol = 1e-9) {
    for (std::size_t i = 0; i < spec.generators.size(); ++i)
        for (std::size_t j = i + 1; j < spec.generators.size(); ++j) {
            const auto& a = spec.generators[i];
            const auto& b = spec.generators[j];
            if (max_abs_diff(a.gl * b.gl, b.gl * a.gl) > tol || max_abs_diff(a.gr * b.gr, b.gr * a.gr) > tol)
                return false;
        }
    return true;
}

inline bool near_pm_identity(const Mat2& m, double tol) {
    return max_abs_diff(m, Mat2::identity()) <= tol || max_abs_diff(-1.0 * m, Mat2::identity()) <= tol;
}

inline ScreenReport screen_admissible(const GroupSpec& spec, const Tolerances& tol = default_tolerances()) {
    ScreenReport r;
    auto words = enumerate_words(spec);
    r.words = words.size();
    r.abelian = is_abelian(spec);
    bool collision = false;
    std::string collision_word;
    for (const auto& w : words) {
        if (w.letters.empty()) continue;
        auto s = is_synchronized(w.g, tol.eps_tr);
        if (s.left.type == ElementType::ELLIPTIC || s.right.type == ElementType::ELLIPTIC) {
            r.verdict = ScreenVerdict::REJECTED;
            r.reason = "elliptic element";
            r.witness_word = word_string(w.letters);
            return r;
        }
        if (!s.synchronized) {
            r.verdict = ScreenVerdict::REJECTED;
            r.reason = "non-synchronized element: " + s.reason;
            r.witness_word = word_string(w.letters);
            return r;
        }
        if (s.left.type == ElementType::HYPERBOLIC) r.left_hyperbolic = true;
        if (s.right.type == ElementType::HYPERBOLIC) r.right_hyperbolic = true;
        bool l = near_pm_identity(w.g.gl, tol.identity_collision);
        bool rr = near_pm_identity(w.g.gr, tol.identity_collision);
        // abelian groups may have a trivial factor (translations); screen the pair only
        bool hit = r.abelian ? (l && rr && w.g.k == 0) : (l || rr);
        if (hit && !collision) {
            collision = true;
            collision_word = word_string(w.letters);
        }
    }
    if (r.abelian ? !(r.left_hyperbolic || r.right_hyperbolic) : !(r.left_hyperbolic && r.right_hyperbolic)) {
        r.verdict = ScreenVerdict::REJECTED;
        r.reason = "no hyperbolic element in a projection";
        return r;
    }
    if (collision) {
        r.verdict = ScreenVerdict::INCONCLUSIVE;
        r.reason = "identity collision";
        r.witness_word = collision_word;
    }
    return r;
}

// ---------------------------------------------------------------- limit sets

inline double rp1pair_distance(const Rp1Pair& a, const Rp1Pair& b) {
    return std::max(rp1_distance(a.l, b.l), rp1_distance(a.r, b.r));
}

struct LimitSetSample {
    std::vector<Rp1Pair> pairs;
    std::vector<SPoint> points;
    std::vector<std::string> words;
    double fill_radius = 0; // largest nearest-neighbour distance
};

namespace detail {

// sorted-by-l index for neighbourhood queries in RP1 x RP1
struct PairIndex {
    std::vector<std::pair<double, std::size_t>> byl;
    const std::vector<Rp1Pair>* pts = nullptr;

    explicit PairIndex(const std::vector<Rp1Pair>& p) : pts(&p) {
        for (std::size_t i = 0; i < p.size(); ++i) byl.emplace_back(p[i].l, i);
        std::sort(byl.begin(), byl.end());
    }

    // nearest distance to q among indices != skip, searching only within radius (returns inf if none)
    double nearest(const Rp1Pair& q, double radius, std::size_t skip = static_cast<std::size_t>(-1)) const {
        double best = std::numeric_limits<double>::infinity();
        auto scan = [&](double lo, double hi) {
            auto it = std::lower_bound(byl.begin(), byl.end(), std::make_pair(lo, std::size_t(0)));
            for (; it != byl.end() && it->first <= hi; ++it) {
                if (it->second == skip) continue;
                best = std::min(best, rp1pair_distance(q, (*pts)[it->second]));
            }
        };
        double lo = q.l - radius, hi = q.l + radius;
        scan(std::max(0.0, lo), std::min(kPi, hi));
        if (lo < 0) scan(lo + kPi, kPi);
        if (hi > kPi) scan(0.0, hi - kPi);
        return best;
    }
};

inline void dedup_push(std::vector<Rp1Pair>& pts, std::map<std::pair<long, long>, std::vector<std::size_t>>& grid,
                       const Rp1Pair& p, double tol, std::vector<std::string>* words, const std::string& w) {
    long cl = static_cast<long>(std::floor(p.l / tol)), cr = static_cast<long>(std::floor(p.r / tol));
    long nc = static_cast<long>(std::ceil(kPi / tol));
    for (long dl = -1; dl <= 1; ++dl)
        for (long dr = -1; dr <= 1; ++dr) {
            long a = ((cl + dl) % nc + nc) % nc, b = ((cr + dr) % nc + nc) % nc;
            auto it = grid.find({a, b});
            if (it == grid.end()) continue;
            for (std::size_t i : it->second)
                if (rp1pair_distance(pts[i], p) < tol) return;
        }
    grid[{((cl % nc) + nc) % nc, ((cr % nc) + nc) % nc}].push_back(pts.size());
    pts.push_back(p);
    if (words) words->push_back(w);
}

} // namespace detail

inline double fill_radius(const std::vector<Rp1Pair>& pts) {
    if (pts.size() < 2) return 0;
    detail::PairIndex idx(pts);
    std::vector<double> nn(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        double r = 1e-3;
        double d = idx.nearest(pts[i], r, i);
        while (!std::isfinite(d) && r < kPi) {
            r *= 4;
            d = idx.nearest(pts[i], r, i);
        }
        nn[i] = d;
    });
    return *std::max_element(nn.begin(), nn.end());
}

inline LimitSetSample limit_set(const GroupSpec& spec, const Tolerances& tol = default_tolerances()) {
    auto words = enumerate_words(spec);
    std::vector<Rp1Pair> raw(words.size());
    std::vector<char> ok(words.size(), 0);
    parallel_for(words.size(), [&](std::size_t i) {
        const auto& g = words[i].g;
        auto cl = classify_element(g.gl, tol.eps_tr), cr = classify_element(g.gr, tol.eps_tr);
        if (cl.type != ElementType::HYPERBOLIC || cr.type != ElementType::HYPERBOLIC) return;
        raw[i] = {fixed_points(g.gl, tol.eps_tr).attractive, fixed_points(g.gr, tol.eps_tr).attractive};
        ok[i] = 1;
    });
    LimitSetSample ls;
    std::map<std::pair<long, long>, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < words.size(); ++i)
        if (ok[i]) detail::dedup_push(ls.pairs, grid, raw[i], spec.dedup, &ls.words, word_string(words[i].letters));
    if (ls.pairs.empty()) throw Error(ErrorCode::NoProximalElement, "no word with two hyperbolic factors");
    for (const auto& p : ls.pairs) ls.points.push_back(rp1pair_to_ein2(p));
    ls.fill_radius = fill_radius(ls.pairs);
    return ls;
}

enum class Positivity { ADMISSIBLE_POSITIVE, MINUS_ADMISSIBLE, MIXED };

inline const char* to_string(Positivity p) {
    switch (p) {
    case Positivity::ADMISSIBLE_POSITIVE: return "ADMISSIBLE_POSITIVE";
    case Positivity::MINUS_ADMISSIBLE: return "MINUS_ADMISSIBLE";
    case Positivity::MIXED: return "MIXED";
    }
    return "?";
}

struct PositivityReport {
    Positivity verdict = Positivity::MIXED;
    std::vector<Vec22> lifts; // sign choice matching the verdict (positive target when MIXED)
    double worst = 0;         // largest violation of the winning sign pattern
};

namespace detail {

// Signs from a maximum-|pairing| spanning tree grown from point 0 (Prim), each edge
// oriented so that the pairing has sign `target`.
inline std::vector<Vec22> greedy_lifts(const std::vector<Vec22>& x, double target) {
    std::size_t n = x.size();
    std::vector<Vec22> out(x);
    std::vector<char> done(n, 0);
    std::vector<double> key(n, -1);
    std::vector<std::size_t> parent(n, 0);
    done[0] = 1;
    for (std::size_t j = 1; j < n; ++j) {
        key[j] = std::abs(q_pair_unit(x[0], x[j]));
        parent[j] = 0;
    }
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!done[j] && (best == n || key[j] > key[best])) best = j;
        double s = q_pair(out[parent[best]], x[best]);
        out[best] = (s * target >= 0) ? x[best] : -x[best];
        done[best] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            double k = std::abs(q_pair_unit(x[best], x[j]));
            if (k > key[j]) {
                key[j] = k;
                parent[j] = best;
            }
        }
    }
    return out;
}

// max over pairs of sign * pairing (unit representatives)
inline double worst_pairing(const std::vector<Vec22>& x, double sign) {
    std::size_t n = x.size();
    std::vector<double> w(n, -std::numeric_limits<double>::infinity());
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) w[i] = std::max(w[i], sign * q_pair_unit(x[i], x[j]));
    });
    return *std::max_element(w.begin(), w.end());
}

} // namespace detail

inline PositivityReport positivity_classify(const std::vector<Vec22>& pts, double eps = 1e-9) {
    if (pts.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least two limit points");
    PositivityReport r;
    auto pos = detail::greedy_lifts(pts, -1.0);
    double wp = detail::worst_pairing(pos, +1.0);
    if (wp <= eps) {
        r.verdict = Positivity::ADMISSIBLE_POSITIVE;
        r.lifts = pos;
        r.worst = wp;
        return r;
    }
    auto neg = detail::greedy_lifts(pts, +1.0);
    double wn = detail::worst_pairing(neg, -1.0);
    if (wn <= eps) {
        r.verdict = Positivity::MINUS_ADMISSIBLE;
        r.lifts = neg;
        r.worst = wn;
        return r;
    }
    r.lifts = pos;
    r.worst = wp;
    return r;
}

inline PositivityReport positivity_classify(const LimitSetSample& ls, double eps = 1e-9) {
    std::vector<Vec22> x;
    for (const auto& p : ls.points) x.push_back(p.rep);
    return positivity_classify(x, eps);
}

// Limit set of a group given by 4x4 matrices acting on E: dominant eigenvectors of proximal words.
inline std::vector<Vec22> projective_limit_set(const std::vector<Eigen::Matrix4d>& gens, int max_len, double dedup) {
    std::vector<Eigen::Matrix4d> letters;
    for (const auto& g : gens) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    struct Node {
        Eigen::Matrix4d m;
        int last;
    };
    std::vector<Node> level = {{Eigen::Matrix4d::Identity(), -1}};
    std::vector<Vec22> out;
    auto push = [&](const Eigen::Matrix4d& m) {
        Eigen::EigenSolver<Eigen::Matrix4d> es(m);
        auto ev = es.eigenvalues();
        int i0 = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(ev[i]) > std::abs(ev[i0])) i0 = i;
        double second = 0;
        for (int i = 0; i < 4; ++i)
            if (i != i0) second = std::max(second, std::abs(ev[i]));
        if (!(std::abs(ev[i0]) > second * (1 + 1e-6)) || std::abs(ev[i0].imag()) > 1e-9) return;
        Eigen::Vector4d v = es.eigenvectors().col(i0).real();
        v.normalize();
        Vec22 p{v[0], v[1], v[2], v[3]};
        for (const auto& q : out)
            if (euclid_norm(q - p) < dedup || euclid_norm(q + p) < dedup) return;
        out.push_back(p);
    };
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Node> next;
        for (const auto& nd : level)
            for (int l = 0; l < static_cast<int>(letters.size()); ++l) {
                if (nd.last >= 0 && (l ^ 1) == nd.last) continue;
                Eigen::Matrix4d m = nd.m * letters[l];
                m /= m.cwiseAbs().maxCoeff();
                next.push_back({m, l});
                push(m);
            }
        level = std::move(next);
    }
    return out;
}

// (u, v, x1, x2) -> (x1, x2, u, v): reverses the sign of Q
inline Eigen::Matrix4d anti_isometry_sigma() {
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S(0, 2) = S(1, 3) = S(2, 0) = S(3, 1) = 1;
    return S;
}

struct InvarianceReport {
    std::size_t checked = 0, misses = 0;
    double worst = 0;
};

inline InvarianceReport invariance_check(const GroupSpec& spec, const LimitSetSample& ls, double tol) {
    InvarianceReport r;
    detail::PairIndex idx(ls.pairs);
    std::vector<AdsIsometry> gens;
    for (const auto& g : spec.generators) {
        gens.push_back(make_isometry(g.gl, g.gr, g.k));
        gens.push_back(inverse(gens.back()));
    }
    std::vector<double> worst(ls.pairs.size(), 0);
    std::vector<std::size_t> miss(ls.pairs.size(), 0);
    parallel_for(ls.pairs.size(), [&](std::size_t i) {
        for (const auto& g : gens) {
            double d = idx.nearest(act_on_boundary(g, ls.pairs[i]), 2 * tol);
            if (!(d <= tol)) ++miss[i];
            worst[i] = std::max(worst[i], std::isfinite(d) ? d : 2 * tol);
        }
    });
    r.checked = ls.pairs.size() * gens.size();
    for (std::size_t i = 0; i < ls.pairs.size(); ++i) {
        r.misses += miss[i];
        r.worst = std::max(r.worst, worst[i]);
    }
    return r;
}

struct MinimalityReport {
    std::size_t orbit_points = 0;
    double coverage = 0; // largest distance from a sample point to the orbit
    bool pass = false;
};

inline MinimalityReport minimality_probe(const GroupSpec& spec, const LimitSetSample& ls, const Rp1Pair& seed,
                                         double tol) {
    MinimalityReport r;
    auto words = enumerate_words(spec);
    std::vector<Rp1Pair> orbit;
    std::map<std::pair<long, long>, std::vector<std::size_t>> grid;
    for (const auto& w : words) detail::dedup_push(orbit, grid, act_on_boundary(w.g, seed), tol / 4, nullptr, "");
    r.orbit_points = orbit.size();
    detail::PairIndex idx(orbit);
    std::vector<double> d(ls.pairs.size());
    parallel_for(ls.pairs.size(), [&](std::size_t i) {
        double rad = 4 * tol;
        double v = idx.nearest(ls.pairs[i], rad);
        while (!std::isfinite(v) && rad < kPi) {
            rad *= 4;
            v = idx.nearest(ls.pairs[i], rad);
        }
        d[i] = v;
    });
    r.coverage = d.empty() ? 0 : *std::max_element(d.begin(), d.end());
    r.pass = r.coverage <= tol;
    return r;
}

inline AchronalSet invisible_of_limit_set(const GroupSpec& spec, const Tolerances& tol = default_tolerances()) {
    auto ls = limit_set(spec, tol);
    auto pos = positivity_classify(ls);
    if (pos.verdict != Positivity::ADMISSIBLE_POSITIVE)
        throw Error(ErrorCode::NotPositive, std::string("limit set is ") + to_string(pos.verdict));
    std::vector<SPoint> rays;
    for (const auto& v : pos.lifts) rays.push_back({v, RayClass::EIN2});
    return certify_achronal_rays(rays, tol);
}

} // namespace adskit
