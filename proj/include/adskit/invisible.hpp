#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "causality.hpp"
#include "hull.hpp"

namespace adskit {

// Lipschitz envelopes of the boundary data f on lambda0.
struct EnvelopePair {
    std::vector<S2> b;     // boundary directions
    std::vector<double> f; // lifted times
    double center = 0;     // (max f + min f) / 2; Klein and conformal tests agree in [center - pi, center + pi)

    double f_minus(const S2& s) const {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, f[i] - sphere_distance(s, b[i]));
        return m;
    }
    double f_plus(const S2& s) const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < b.size(); ++i) m = std::min(m, f[i] + sphere_distance(s, b[i]));
        return m;
    }
    Vec22 lambda(std::size_t i) const { return {std::cos(f[i]), std::sin(f[i]), b[i][0], b[i][1]}; }
    std::vector<Vec22> lambdas() const {
        std::vector<Vec22> out;
        for (std::size_t i = 0; i < b.size(); ++i) out.push_back(lambda(i));
        return out;
    }
    bool contains(const ConfPoint& p) const {
        double t = p.theta;
        return f_minus(p.s) < t && t < f_plus(p.s);
    }
};

inline EnvelopePair envelopes_of(const std::vector<ConfPoint>& pts) {
    EnvelopePair e;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : pts) {
        e.b.push_back(normalized3({p.s[0], p.s[1], 0.0}));
        e.f.push_back(p.theta);
        lo = std::min(lo, p.theta);
        hi = std::max(hi, p.theta);
    }
    e.center = 0.5 * (lo + hi);
    return e;
}

inline EnvelopePair build_envelopes(const AchronalSet& s) { return envelopes_of(s.points); }

inline bool invisible_contains_conf(const EnvelopePair& e, const ConfPoint& p) {
    if (is_boundary(p)) throw Error(ErrorCode::BoundaryPoint, "membership is defined for interior points");
    return e.contains(p);
}

// Klein model: <p|x> < 0 for all x in the lift of Lambda (exact sign, no band).
// Boundary queries are accepted; a point of Lambda pairs to zero with itself and is not inside.
inline bool invisible_contains_klein(const AchronalSet& s, const SPoint& p) {
    if (p.cls == RayClass::EXTERIOR) throw Error(ErrorCode::InvalidInput, "query must be in the closure of AdS");
    if (!s.generic) throw Error(ErrorCode::InconsistentLift, "pure lightlike set has no simultaneous lift");
    for (const auto& x : s.points)
        if (!(q_pair(p.rep, boundary_unit_rep(x)) < 0)) return false;
    return true;
}

inline S2 random_hemisphere(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double z = U(rng), a = kTwoPi * U(rng);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(a), r * std::sin(a), z};
}

// random point of E(Lambda): hemisphere point, time uniform between the envelopes
inline ConfPoint random_invisible_point(const EnvelopePair& e, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        S2 s = random_hemisphere(rng);
        if (s[2] < 1e-6) continue;
        double lo = e.f_minus(s), hi = e.f_plus(s);
        if (!(hi > lo)) continue;
        ConfPoint p{s, lo + (hi - lo) * U(rng)};
        if (e.contains(p)) return p;
    }
}

// ---------------------------------------------------------------- gaps

enum class GapKind { ACHRONAL, LIGHTLIKE, EXTREME };

inline const char* to_string(GapKind k) {
    switch (k) {
    case GapKind::ACHRONAL: return "ACHRONAL";
    case GapKind::LIGHTLIKE: return "LIGHTLIKE";
    case GapKind::EXTREME: return "EXTREME";
    }
    return "?";
}

struct GapPair {
    ConfPoint x, y;  // x then y counterclockwise along the arc
    GapKind kind = GapKind::ACHRONAL;
    int arc_id = 0;  // index of x in the angular order
    double arc = 0;  // length of the ccw arc from x to y
};

struct GapStructure {
    std::vector<GapPair> gaps;
    AchronalSet filled; // input plus samples of the lightlike gap segments
};

namespace detail {

inline std::vector<ConfPoint> angular_sort(const AchronalSet& s) {
    std::vector<ConfPoint> p = s.points;
    std::sort(p.begin(), p.end(), [](const ConfPoint& a, const ConfPoint& b) {
        return wrap_2pi(conf_phi(a)) < wrap_2pi(conf_phi(b));
    });
    return p;
}

} // namespace detail

inline GapStructure gap_pairs(const AchronalSet& s, int fill_samples = 32) {
    if (!s.generic) throw Error(ErrorCode::InvalidInput, "gap pairs need a generic set");
    auto p = detail::angular_sort(s);
    std::size_t n = p.size();
    GapStructure out;
    double eps = std::max(s.tol.eps_causal, 1e-9) * 10;
    std::vector<ConfPoint> extra;
    for (std::size_t i = 0; i < n; ++i) {
        const ConfPoint& a = p[i];
        const ConfPoint& b = p[(i + 1) % n];
        GapPair g;
        g.x = a;
        g.y = b;
        g.arc_id = static_cast<int>(i);
        g.arc = wrap_2pi(conf_phi(b) - conf_phi(a));
        if (n == 2 && i == 1) g.arc = kTwoPi - out.gaps[0].arc;
        if (g.arc <= 0) g.arc = kTwoPi;
        double dt = b.theta - a.theta;
        if (std::abs(std::abs(dt) - g.arc) <= eps)
            g.kind = GapKind::LIGHTLIKE;
        else if (std::abs(std::abs(dt) - (kTwoPi - g.arc)) <= eps)
            g.kind = GapKind::EXTREME;
        else
            g.kind = GapKind::ACHRONAL;
        if (g.kind == GapKind::LIGHTLIKE) {
            double sg = dt >= 0 ? 1.0 : -1.0;
            double phi0 = conf_phi(a);
            for (int k = 1; k <= fill_samples; ++k) {
                double t = g.arc * k / (fill_samples + 1);
                extra.push_back(conf_boundary(phi0 + t, a.theta + sg * t));
            }
        }
        out.gaps.push_back(g);
    }
    if (extra.empty()) {
        out.filled = s;
    } else {
        std::vector<ConfPoint> all = s.points;
        all.insert(all.end(), extra.begin(), extra.end());
        out.filled = certify_achronal(all, s.tol);
    }
    return out;
}

struct Corners {
    ConfPoint z_plus, z_minus;
    SPoint ray_plus, ray_minus;
};

// z+ = (l_x, r_y), z- = (l_y, r_x) in RP1 x RP1; computed in the conformal chart and cross-checked.
inline Corners corners(const GapPair& g) {
    if (g.kind != GapKind::ACHRONAL) throw Error(ErrorCode::DegenerateGap, "corners need an achronal gap");
    double L = g.arc, dt = g.y.theta - g.x.theta;
    double pa = conf_phi(g.x);
    double t = 0.5 * (L + dt), t2 = 0.5 * (L - dt);
    if (!(t > 0 && t < L && t2 > 0 && t2 < L)) throw Error(ErrorCode::DegenerateGap, "endpoints are causally related");
    Corners c;
    c.z_plus = conf_boundary(pa + t, g.x.theta + t);
    c.z_minus = conf_boundary(pa + t2, g.x.theta - t2);
    c.ray_plus = {boundary_unit_rep(c.z_plus) * std::sqrt(2.0), RayClass::EIN2};
    c.ray_minus = {boundary_unit_rep(c.z_minus) * std::sqrt(2.0), RayClass::EIN2};

    auto bx = ein2_to_rp1pair({boundary_unit_rep(g.x) * std::sqrt(2.0), RayClass::EIN2});
    auto by = ein2_to_rp1pair({boundary_unit_rep(g.y) * std::sqrt(2.0), RayClass::EIN2});
    auto bp = ein2_to_rp1pair(c.ray_plus);
    auto bm = ein2_to_rp1pair(c.ray_minus);
    const double tol = 1e-7;
    if (rp1_distance(bp.l, bx.l) > tol || rp1_distance(bp.r, by.r) > tol || rp1_distance(bm.l, by.l) > tol ||
        rp1_distance(bm.r, bx.r) > tol)
        throw Error(ErrorCode::DegenerateGap, "corner does not match the leaf intersection");
    return c;
}

// Tent samples: x -> z (slope +-1) then z -> y.
inline std::vector<ConfPoint> tent_samples(const GapPair& g, const ConfPoint& z, int per_side) {
    std::vector<ConfPoint> out;
    double pa = conf_phi(g.x), pz = conf_phi(z);
    double t1 = wrap_2pi(pz - pa), t2 = g.arc - t1;
    double s1 = z.theta >= g.x.theta ? 1.0 : -1.0;
    double s2 = z.theta >= g.y.theta ? 1.0 : -1.0;
    for (int k = 1; k <= per_side; ++k) {
        double u = t1 * k / (per_side + 1);
        out.push_back(conf_boundary(pa + u, g.x.theta + s1 * u));
    }
    out.push_back(z);
    for (int k = per_side; k >= 1; --k) {
        double u = t2 * k / (per_side + 1);
        out.push_back(conf_boundary(pa + g.arc - u, g.y.theta + s2 * u));
    }
    return out;
}

struct Completions {
    AchronalSet plus, minus;
    std::vector<Corners> corners; // per achronal gap, in gap order
};

inline Completions completions(const AchronalSet& s, int per_side = 24) {
    GapStructure gs = gap_pairs(s);
    Completions c;
    std::vector<ConfPoint> up = gs.filled.points, down = gs.filled.points;
    bool any = false;
    for (const auto& g : gs.gaps) {
        if (g.kind != GapKind::ACHRONAL) continue;
        any = true;
        Corners k = corners(g);
        c.corners.push_back(k);
        auto a = tent_samples(g, k.z_plus, per_side);
        auto b = tent_samples(g, k.z_minus, per_side);
        up.insert(up.end(), a.begin(), a.end());
        down.insert(down.end(), b.begin(), b.end());
    }
    if (!any) {
        c.plus = s;
        c.minus = s;
        return c;
    }
    c.plus = certify_achronal(up, s.tol);
    c.minus = certify_achronal(down, s.tol);
    return c;
}

// ---------------------------------------------------------------- decomposition

// closed tetrahedron {a x + b y + c z+ + d z- : a, b, c, d >= 0}
struct EndTetra {
    GapPair gap;
    Corners corner;
    Eigen::Matrix4d inv;

    Eigen::Vector4d coefficients(const Vec22& p) const {
        return inv * Eigen::Vector4d(p.u, p.v, p.x1, p.x2);
    }
    bool contains(const Vec22& p, double eps = 1e-9) const {
        Eigen::Vector4d c = coefficients(p / euclid_norm(p));
        return c.minCoeff() >= -eps;
    }
};

inline EndTetra make_end(const GapPair& g, const Corners& c) {
    EndTetra e;
    e.gap = g;
    e.corner = c;
    Eigen::Matrix4d M;
    Vec22 cols[4] = {boundary_unit_rep(g.x), boundary_unit_rep(g.y), boundary_unit_rep(c.z_plus),
                     boundary_unit_rep(c.z_minus)};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) M(i, j) = cols[j][i];
    Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
    if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateGap, "end tetrahedron is degenerate");
    e.inv = lu.inverse();
    return e;
}

struct Decomposition {
    AchronalSet lambda;  // filled
    Elementary kind = Elementary::NONELEMENTARY;
    EnvelopePair env, env_plus, env_minus; // E(Lambda), E(Lambda+), E(Lambda-)
    std::vector<GapPair> gaps;
    std::vector<Corners> tents;
    std::vector<EndTetra> ends;
    double horizon_band = 1e-6;

    bool in_core_plus(const ConfPoint& p) const { return env_plus.contains(p); }
    bool in_core_minus(const ConfPoint& p) const { return env_minus.contains(p); }
    // index of a closed end containing p, or -1
    int end_index(const ConfPoint& p, double eps = 1e-9) const {
        Vec22 q = conf_to_quadric(p);
        for (std::size_t i = 0; i < ends.size(); ++i)
            if (ends[i].contains(q, eps)) return static_cast<int>(i);
        return -1;
    }
    // past boundary of the future core
    bool on_future_horizon(const ConfPoint& p) const {
        return std::abs(p.theta - env_plus.f_minus(p.s)) < horizon_band && env.contains(p);
    }
    bool on_past_horizon(const ConfPoint& p) const {
        return std::abs(p.theta - env_minus.f_plus(p.s)) < horizon_band && env.contains(p);
    }
    bool covered(const ConfPoint& p, double eps = 1e-9) const {
        return in_core_plus(p) || in_core_minus(p) || end_index(p, eps) >= 0;
    }
};

inline Decomposition decompose(const AchronalSet& s) {
    if (!s.generic) throw Error(ErrorCode::ElementaryInput, "pure lightlike input");
    GapStructure gs = gap_pairs(s);
    Decomposition d;
    d.lambda = gs.filled;
    d.kind = classify_elementary(gs.filled).kind;
    if (d.kind == Elementary::CONICAL || d.kind == Elementary::EXTREME)
        throw Error(ErrorCode::ElementaryInput, std::string("input is ") + to_string(d.kind));
    d.horizon_band = s.tol.horizon_band;
    d.env = build_envelopes(d.lambda);
    std::vector<ConfPoint> up = d.lambda.points, down = d.lambda.points;
    for (const auto& g : gs.gaps) {
        if (g.kind != GapKind::ACHRONAL) continue;
        Corners c = corners(g);
        d.gaps.push_back(g);
        d.tents.push_back(c);
        d.ends.push_back(make_end(g, c));
        // the pairing is linear along each null side of a tent, so the corner alone decides
        up.push_back(c.z_plus);
        down.push_back(c.z_minus);
    }
    d.env_plus = envelopes_of(up);
    d.env_minus = envelopes_of(down);
    return d;
}

// ---------------------------------------------------------------- hull surfaces

struct HullSurfaces {
    PatchHull ph;
    bool flat = false;
    Vec3 future_dir = Vec3::Zero(); // time direction in patch coordinates
    std::vector<int> kind;          // per facet: +1 future spacelike, -1 past spacelike, 0 edge part
    std::vector<Vec22> duals;       // per facet

    std::vector<int> incident(const Vec3& y, double eps) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < ph.hull.facets.size(); ++i) {
            const auto& f = ph.hull.facets[i];
            if (std::abs(f.normal.dot(y) - f.offset) <= eps) out.push_back(static_cast<int>(i));
        }
        return out;
    }

    bool pair_has_timelike_support(int i, int j) const {
        const Vec22& a = duals[i];
        const Vec22& b = duals[j];
        for (int k = 0; k <= 64; ++k) {
            double t = k / 64.0;
            if (q_form((1 - t) * a + t * b) > 0) return true;
        }
        return false;
    }

    bool in_edge_part(const Vec22& q, double eps = 1e-7) const {
        if (flat) return false;
        Vec3 y = ph.to_patch(q);
        if (!ph.hull.contains(y, eps)) return false;
        auto inc = incident(y, eps);
        for (int i : inc)
            if (kind[i] == 0) return true;
        for (std::size_t a = 0; a < inc.size(); ++a)
            for (std::size_t b = a + 1; b < inc.size(); ++b)
                if (pair_has_timelike_support(inc[a], inc[b])) return true;
        return false;
    }

    // sign +1 for C+, -1 for C-
    bool in_c(const Vec22& q, int sign, double eps = 1e-7) const {
        Vec3 y = ph.to_patch(q);
        if (flat) return ph.hull.contains(y, eps);
        if (in_edge_part(q, eps)) return false;
        for (int i : incident(y, eps))
            if (kind[i] == sign) return true;
        return false;
    }
    bool in_c_plus(const Vec22& q, double eps = 1e-7) const { return in_c(q, +1, eps); }
    bool in_c_minus(const Vec22& q, double eps = 1e-7) const { return in_c(q, -1, eps); }

    // first boundary point met by the line y + t * future_dir, t >= 0, from a hull point y
    Vec22 vertical_exit(const Vec22& q) const {
        Vec3 y = ph.to_patch(q);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : ph.hull.facets) {
            double rate = f.normal.dot(future_dir);
            if (rate <= 1e-14) continue;
            double t = (f.offset - f.normal.dot(y)) / rate;
            best = std::min(best, std::max(t, 0.0));
        }
        return ph.from_patch(y + best * future_dir);
    }
};

inline HullSurfaces hull_surfaces(const AchronalSet& s) {
    if (!s.witness.found) throw Error(ErrorCode::InvalidInput, "hull surfaces need a strict de Sitter witness");
    HullSurfaces h;
    h.ph = convex_hull_patch(s.rays(), SPoint{s.witness.witness, RayClass::ADS_INTERIOR}, s.tol.eps_hull);
    h.flat = h.ph.hull.dim < 3;
    const Vec22& c = h.ph.center;
    Vec22 T{-c.v, c.u, 0, 0};
    for (int k = 0; k < 3; ++k) h.future_dir[k] = q_pair(T, h.ph.frame[k]) * q_form(h.ph.frame[k]);
    h.future_dir.normalize();
    for (const auto& f : h.ph.hull.facets) {
        Vec22 l = h.ph.facet_dual(f);
        l = l / euclid_norm(l);
        h.duals.push_back(l);
        if (q_form(l) < -s.tol.eps_q)
            h.kind.push_back(f.normal.dot(h.future_dir) > 0 ? +1 : -1);
        else
            h.kind.push_back(0);
    }
    return h;
}

// ---------------------------------------------------------------- cosmological time

struct CosmoResult {
    double tau = 0;          // integrated conformal-weighted length of the optimal geodesic
    double tau_shooting = 0; // first exit time of the optimal geodesic (pairing formula)
    double bracket = 0;      // |tau - tau_shooting| plus the optimizer resolution
    Vec22 direction;         // past unit timelike tangent at p
    ConfPoint exit;
};

namespace detail {

struct TimelikeFrame {
    Vec22 p, e0, e1, e2; // e0 future unit timelike, e1, e2 spacelike
};

inline TimelikeFrame timelike_frame(const Vec22& p) {
    TimelikeFrame F;
    F.p = p;
    double R = std::hypot(p.u, p.v);
    F.e0 = Vec22{-p.v, p.u, 0, 0} / R;
    std::vector<Vec22> basis = {p, F.e0};
    Vec22 cand[4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
    std::vector<Vec22> sp;
    for (const auto& e : cand) {
        if (sp.size() == 2) break;
        Vec22 w = e;
        for (const auto& b : basis) w -= (q_pair(w, b) / q_form(b)) * b;
        double q = q_form(w);
        if (q < 1e-8) continue;
        w = w / std::sqrt(q);
        basis.push_back(w);
        sp.push_back(w);
    }
    F.e1 = sp[0];
    F.e2 = sp[1];
    return F;
}

inline Vec22 past_direction(const TimelikeFrame& F, double eta, double psi) {
    return -std::cosh(eta) * F.e0 + std::sinh(eta) * (std::cos(psi) * F.e1 + std::sin(psi) * F.e2);
}

// first t > 0 where cos t p + sin t w leaves the dual of Lambda
inline double exit_time(const std::vector<Vec22>& lam, const Vec22& p, const Vec22& w) {
    double T = kPi;
    for (const auto& l : lam) {
        double a = q_pair(p, l), b = q_pair(w, l);
        T = std::min(T, std::atan2(-a, b));
    }
    return T;
}

} // namespace detail

inline CosmoResult cosmological_time(const EnvelopePair& e, const ConfPoint& p, int steps = 200) {
    if (is_boundary(p) || !e.contains(p)) throw Error(ErrorCode::OutsideDomain, "point is not in E(Lambda)");
    Vec22 P = conf_to_quadric(p);
    auto F = detail::timelike_frame(P);
    auto lam = e.lambdas();
    auto T = [&](double eta, double psi) {
        return detail::exit_time(lam, P, detail::past_direction(F, eta, psi));
    };
    // grid, then pattern search with a rotating direction set from the best nodes;
    // T is a minimum of smooth functions, so a fixed stencil stalls on its ridges
    const int NE = 32, NP = 64;
    const double eta_max = 5.0;
    std::vector<std::tuple<double, double, double>> nodes;
    for (int i = 0; i <= NE; ++i)
        for (int j = 0; j < NP; ++j) {
            double eta = eta_max * i / NE, psi = kTwoPi * j / NP;
            nodes.emplace_back(T(eta, psi), eta, psi);
            if (i == 0) break;
        }
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
    double best = -1, be = 0, bp = 0, res = 0;
    const double golden = kPi * (3 - std::sqrt(5.0));
    for (std::size_t k = 0; k < std::min<std::size_t>(8, nodes.size()); ++k) {
        auto [v, eta, psi] = nodes[k];
        double h = eta_max / NE, rot = 0;
        int fails = 0, wins = 0;
        while (h > 1e-11) {
            bool moved = false;
            for (int d = 0; d < 16; ++d) {
                double a = rot + kTwoPi * d / 16;
                double ne = std::abs(eta + h * std::cos(a)), np = psi + h * std::sin(a) / std::max(0.05, std::tanh(eta));
                double nv = T(ne, np);
                if (nv > v) {
                    v = nv;
                    eta = ne;
                    psi = np;
                    moved = true;
                    break;
                }
            }
            rot += golden;
            if (moved) {
                fails = 0;
                // long walks towards null directions
                if (++wins >= 2) {
                    h = std::min(2 * h, 1.0);
                    wins = 0;
                }
            } else if (++fails >= 3) {
                h *= 0.5;
                fails = wins = 0;
            }
        }
        if (v > best) {
            best = v;
            be = eta;
            bp = psi;
            res = h;
        }
    }
    CosmoResult r;
    r.tau_shooting = best;
    r.direction = detail::past_direction(F, be, bp);
    // conformal exit by bisection along the geodesic, then the weighted length
    auto point = [&](double t) { return quadric_to_conf(std::cos(t) * P + std::sin(t) * r.direction, p.theta); };
    double lo = 0, hi = std::min(kPi - 1e-9, best * 1.05 + 1e-6);
    if (e.contains(point(hi))) hi = kPi - 1e-9;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (e.contains(point(mid)) ? lo : hi) = mid;
    }
    double len = 0;
    ConfPoint prev = point(0);
    for (int k = 1; k <= steps; ++k) {
        ConfPoint cur = point(lo * k / steps);
        double dth = cur.theta - prev.theta, ds = sphere_distance(cur.s, prev.s);
        S2 mid = normalized3({cur.s[0] + prev.s[0], cur.s[1] + prev.s[1], cur.s[2] + prev.s[2]});
        len += std::sqrt(std::max(0.0, dth * dth - ds * ds)) / mid[2];
        prev = cur;
    }
    r.tau = len;
    r.exit = point(lo);
    r.bracket = std::abs(r.tau - r.tau_shooting) + res;
    return r;
}

// ---------------------------------------------------------------- Cauchy development

struct CauchyReport {
    std::size_t surface_points = 0, surface_outside = 0;
    std::size_t probes = 0, multi_crossings = 0, zero_crossings = 0;
    bool pass() const { return surface_outside == 0 && multi_crossings == 0 && zero_crossings == 0; }
};

inline CauchyReport cauchy_development_check(const std::function<double(const S2&)>& g, const EnvelopePair& e,
                                             std::size_t surface_samples, std::size_t probes, std::uint64_t seed,
                                             int per_geodesic = 400) {
    CauchyReport rep;
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < surface_samples; ++k) {
        S2 s = random_hemisphere(rng);
        if (s[2] < 1e-3) continue;
        ++rep.surface_points;
        if (!e.contains({s, g(s)})) ++rep.surface_outside;
    }
    auto lam = e.lambdas();
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (std::size_t k = 0; k < probes; ++k) {
        ConfPoint q = random_invisible_point(e, rng);
        Vec22 P = conf_to_quadric(q);
        auto F = detail::timelike_frame(P);
        Vec22 w = -detail::past_direction(F, 1.5 * U(rng), kTwoPi * U(rng)); // future
        double tf = detail::exit_time(lam, P, w), tp = detail::exit_time(lam, P, -w);
        int crossings = 0;
        double prev = 0;
        bool first = true;
        for (int j = 1; j < per_geodesic; ++j) {
            double t = -tp + (tf + tp) * j / per_geodesic;
            ConfPoint c = quadric_to_conf(std::cos(t) * P + std::sin(t) * w, q.theta);
            double h = c.theta - g(c.s);
            if (!first && ((h > 0) != (prev > 0))) ++crossings;
            prev = h;
            first = false;
        }
        ++rep.probes;
        if (crossings == 0) ++rep.zero_crossings;
        if (crossings > 1) ++rep.multi_crossings;
    }
    return rep;
}

} // namespace adskit
