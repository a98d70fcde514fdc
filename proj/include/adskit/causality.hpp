#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "charts.hpp"
#include "hull.hpp"

namespace adskit {

enum class TimeSign { FUTURE, PAST, NONE };

inline const char* to_string(TimeSign s) {
    switch (s) {
    case TimeSign::FUTURE: return "FUTURE";
    case TimeSign::PAST: return "PAST";
    case TimeSign::NONE: return "NONE";
    }
    return "?";
}

struct CausalVerdict {
    bool related = false;
    bool strict = false;
    TimeSign time_sign = TimeSign::NONE;
};

// Causality in the universal cover of the conformal compactification: p and q are related
// iff d(s_p, s_q) <= |theta_q - theta_p|. Time sign is that of q relative to p.
inline CausalVerdict causally_related(const ConfPoint& p, const ConfPoint& q,
                                      double eps = default_tolerances().eps_causal) {
    double d = sphere_distance(p.s, q.s);
    double dt = q.theta - p.theta;
    CausalVerdict v;
    v.related = d <= std::abs(dt) + eps;
    v.strict = d < std::abs(dt) - eps;
    if (v.related) v.time_sign = dt >= 0 ? TimeSign::FUTURE : TimeSign::PAST;
    return v;
}

// unit representative of a boundary lift projected to S(E)
inline Vec22 boundary_unit_rep(const ConfPoint& p) {
    const double k = 1.0 / std::sqrt(2.0);
    return {k * std::cos(p.theta), k * std::sin(p.theta), k * p.s[0], k * p.s[1]};
}

struct AchronalSet {
    std::vector<ConfPoint> points; // boundary lifts, s[2] = 0
    std::vector<double> pairings;  // n x n, unit representatives
    bool generic = true;
    bool strict = false;
    DesitterWitness witness;
    Tolerances tol;

    std::size_t size() const { return points.size(); }
    double pairing(std::size_t i, std::size_t j) const { return pairings[i * points.size() + j]; }
    double phi(std::size_t i) const { return std::atan2(points[i].s[1], points[i].s[0]); }
    std::vector<SPoint> rays() const {
        std::vector<SPoint> r;
        r.reserve(points.size());
        for (const auto& p : points) r.push_back({boundary_unit_rep(p) * std::sqrt(2.0), RayClass::EIN2});
        return r;
    }
};

namespace detail {

inline bool opposite_rays(const Vec22& a, const Vec22& b, double tol = 1e-7) {
    return euclid_norm(a + b) < tol;
}

inline bool pure_lightlike(const std::vector<Vec22>& reps, double eps_q) {
    std::size_t n = reps.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!opposite_rays(reps[i], reps[j])) continue;
            bool all_null = true;
            for (std::size_t k = 0; k < n && all_null; ++k)
                all_null = std::abs(q_pair(reps[k], reps[i])) <= eps_q && std::abs(q_pair(reps[k], reps[j])) <= eps_q;
            if (all_null) return true;
        }
    return false;
}

} // namespace detail

// Certify a finite set of boundary lifts as achronal. Lifts are taken as given (no branch choice).
inline AchronalSet certify_achronal(const std::vector<ConfPoint>& input, const Tolerances& tol = default_tolerances()) {
    AchronalSet out;
    out.tol = tol;
    for (const auto& p : input) {
        if (!std::isfinite(p.theta) || !is_finite(Vec22{p.s[0], p.s[1], p.s[2], 0}))
            throw Error(ErrorCode::InvalidInput, "non-finite point");
        if (std::abs(p.s[2]) > tol.eps_boundary) throw Error(ErrorCode::InvalidInput, "point is not on the boundary");
        ConfPoint b = conf_boundary(std::atan2(p.s[1], p.s[0]), p.theta);
        bool dup = false;
        for (const auto& q : out.points)
            if (sphere_distance(q.s, b.s) < 1e-12 && std::abs(q.theta - b.theta) < 1e-12) dup = true;
        if (!dup) out.points.push_back(b);
    }
    std::size_t n = out.points.size();
    if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least two distinct points");

    std::vector<Vec22> reps(n);
    for (std::size_t i = 0; i < n; ++i) reps[i] = boundary_unit_rep(out.points[i]);
    out.pairings.assign(n * n, 0.0);
    out.strict = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = sphere_distance(out.points[i].s, out.points[j].s);
            double dt = std::abs(out.points[j].theta - out.points[i].theta);
            double q = q_pair(reps[i], reps[j]);
            out.pairings[i * n + j] = q;
            if (dt > d + tol.eps_causal || q > tol.eps_q) {
                std::ostringstream os;
                os << "points " << i << " and " << j << " are timelike related (d = " << d << ", |dtheta| = " << dt
                   << ", pairing = " << q << ")";
                throw Error(ErrorCode::NotAchronal, os.str());
            }
            if (!(q < -tol.eps_q)) out.strict = false;
        }
    out.generic = !detail::pure_lightlike(reps, tol.eps_q);

    std::vector<SPoint> rays;
    for (const auto& r : reps) rays.push_back({r * std::sqrt(2.0), RayClass::EIN2});
    out.witness = desitter_domain_find(rays, tol.eps_q);
    if (out.generic) {
        if (!out.witness.found)
            throw Error(ErrorCode::InconsistentLift, "no de Sitter witness for a generic set");
        // the witness lift must reproduce the given lifts up to one deck translation
        auto lifted = lift_boundary_rays(rays, out.witness.witness);
        double shift = std::round((out.points[0].theta - lifted[0].theta) / kTwoPi);
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(out.points[i].theta - lifted[i].theta - shift * kTwoPi) > 1e-7)
                throw Error(ErrorCode::InconsistentLift, "lifts disagree with the de Sitter witness");
    }
    return out;
}

// Certify Ein2 rays: lifts are chosen from the de Sitter witness.
inline AchronalSet certify_achronal_rays(const std::vector<SPoint>& rays, const Tolerances& tol = default_tolerances()) {
    if (rays.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least two points");
    for (const auto& r : rays)
        if (r.cls != RayClass::EIN2) throw Error(ErrorCode::NotOnEin2, "input ray is not on Ein2");
    DesitterWitness w = desitter_domain_find(rays, tol.eps_q);
    if (!w.found) {
        // closure witness only; lifts still follow the best candidate
        double m = -1e300;
        for (const auto& r : rays) m = std::max(m, q_pair_unit(w.best, r.rep));
        if (m > 1e-6) throw Error(ErrorCode::NotAchronal, "rays are not contained in the closure of a de Sitter domain");
    }
    return certify_achronal(lift_boundary_rays(rays, w.found ? w.witness : w.best), tol);
}

inline bool is_pure_lightlike(const AchronalSet& s) { return !s.generic; }

struct StrictnessReport {
    bool strict = false;       // all off-diagonal pairings < -eps
    bool hull_checked = false; // false when no strict de Sitter witness is available
    bool hull_strict = false;  // every point is a vertex and no facet carries a null pair
    bool agree = true;
    std::vector<std::size_t> non_vertices;
};

inline StrictnessReport strictness_by_extreme_points(const AchronalSet& s) {
    StrictnessReport r;
    r.strict = s.strict;
    if (!s.witness.found) return r;
    auto rays = s.rays();
    PatchHull ph = convex_hull_patch(rays, SPoint{s.witness.witness, RayClass::ADS_INTERIOR}, s.tol.eps_hull);
    r.hull_checked = true;
    std::size_t n = s.size();
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!ph.hull.is_vertex(static_cast<int>(i))) {
            ok = false;
            r.non_vertices.push_back(i);
        }
    auto null_pair = [&](std::size_t i, std::size_t j) { return !(s.pairing(i, j) < -s.tol.eps_q); };
    if (ok) {
        if (ph.hull.dim == 3) {
            for (const auto& f : ph.hull.facets)
                for (std::size_t a = 0; a < f.verts.size() && ok; ++a)
                    for (std::size_t b = a + 1; b < f.verts.size() && ok; ++b)
                        if (null_pair(f.verts[a], f.verts[b])) ok = false;
        } else {
            for (std::size_t a = 0; a < ph.hull.vertices.size() && ok; ++a)
                for (std::size_t b = a + 1; b < ph.hull.vertices.size() && ok; ++b)
                    if (null_pair(ph.hull.vertices[a], ph.hull.vertices[b])) ok = false;
        }
    }
    r.hull_strict = ok;
    r.agree = r.hull_strict == r.strict;
    return r;
}

enum class Elementary { CONICAL, SPLITTING, EXTREME, NONELEMENTARY };

inline const char* to_string(Elementary e) {
    switch (e) {
    case Elementary::CONICAL: return "CONICAL";
    case Elementary::SPLITTING: return "SPLITTING";
    case Elementary::EXTREME: return "EXTREME";
    case Elementary::NONELEMENTARY: return "NONELEMENTARY";
    }
    return "?";
}

// Subset of the boundary circle: closed arcs (lo <= hi, possibly of zero length) with time value
// at lo; a point of X+ is the lift (phi, h(phi)).
struct CommonCone {
    struct Arc {
        double lo, hi;   // phi range
        double theta_lo; // common value at lo
        double slope;    // d theta / d phi along the arc
    };
    std::vector<Arc> arcs;
    bool has_interval(double min_len = 1e-9) const {
        for (const auto& a : arcs)
            if (a.hi - a.lo > min_len) return true;
        return false;
    }
    std::size_t distinct_points() const { return arcs.size(); }
};

struct ElementaryReport {
    Elementary kind = Elementary::NONELEMENTARY;
    CommonCone future, past; // X+ and X-
};

namespace detail {

// Points phi where h_i(phi) = theta_i + sign * d(phi, phi_i) coincide for every i.
inline CommonCone common_cone(const AchronalSet& s, double sign, double eps) {
    std::size_t n = s.size();
    std::vector<double> ph(n), th(n);
    for (std::size_t i = 0; i < n; ++i) {
        ph[i] = wrap_2pi(s.phi(i));
        th[i] = s.points[i].theta;
    }
    std::vector<double> br;
    for (double p : ph) {
        br.push_back(p);
        br.push_back(wrap_2pi(p + kPi));
    }
    std::sort(br.begin(), br.end());
    std::vector<double> b;
    for (double x : br)
        if (b.empty() || x - b.back() > 1e-12) b.push_back(x);
    if (b.size() > 1 && b.front() + kTwoPi - b.back() <= 1e-12) b.pop_back();

    CommonCone out;
    std::vector<double> A(n), S(n);
    for (std::size_t k = 0; k < b.size(); ++k) {
        double lo = b[k], hi = k + 1 < b.size() ? b[k + 1] : b[0] + kTwoPi;
        double mu = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < n; ++i) {
            double w = wrap_pi(mu - ph[i]);
            A[i] = th[i] + sign * std::abs(w);
            S[i] = sign * (w > 0 ? 1.0 : -1.0);
        }
        auto value = [&](std::size_t i, double phi) { return A[i] + S[i] * (phi - mu); };
        int ip = -1, im = -1;
        for (std::size_t i = 0; i < n; ++i) (S[i] > 0 ? ip : im) = static_cast<int>(i);
        if (ip < 0 || im < 0) {
            double lo_v = value(0, lo);
            bool all = true;
            for (std::size_t i = 1; i < n && all; ++i) all = std::abs(value(i, lo) - lo_v) <= eps;
            if (all) out.arcs.push_back({lo, hi, lo_v, S[0]});
            continue;
        }
        double phi = mu + (A[im] - A[ip]) / 2.0;
        if (phi < lo - 1e-12 || phi > hi + 1e-12) continue;
        phi = std::clamp(phi, lo, hi);
        double v0 = value(ip, phi);
        bool all = true;
        for (std::size_t i = 0; i < n && all; ++i) all = std::abs(value(i, phi) - v0) <= eps;
        if (all) out.arcs.push_back({phi, phi, v0, 0.0});
    }
    // merge touching pieces (including across 2pi)
    for (auto& a : out.arcs) {
        double len = a.hi - a.lo, lo = wrap_2pi(a.lo);
        a.hi = lo + len;
        a.lo = lo;
    }
    std::sort(out.arcs.begin(), out.arcs.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    std::vector<CommonCone::Arc> merged;
    for (const auto& a : out.arcs) {
        if (!merged.empty() && a.lo <= merged.back().hi + 1e-9) {
            merged.back().hi = std::max(merged.back().hi, a.hi);
            continue;
        }
        merged.push_back(a);
    }
    if (merged.size() > 1) {
        auto& f = merged.front();
        auto& l = merged.back();
        if (l.hi >= f.lo + kTwoPi - 1e-9) {
            l.hi = std::max(l.hi, f.hi + kTwoPi);
            merged.erase(merged.begin());
        }
    }
    out.arcs = merged;
    return out;
}

} // namespace detail

// Trichotomy from the common future X+ and common past X- on the boundary.
inline ElementaryReport classify_elementary(const AchronalSet& s) {
    ElementaryReport r;
    double eps = std::max(1e-9, s.tol.eps_causal) * 10;
    r.future = detail::common_cone(s, +1.0, eps);
    r.past = detail::common_cone(s, -1.0, eps);
    if (r.future.has_interval() || r.past.has_interval())
        r.kind = Elementary::EXTREME;
    else if (r.future.distinct_points() >= 2 || r.past.distinct_points() >= 2)
        r.kind = Elementary::SPLITTING;
    else if (!r.future.arcs.empty() || !r.past.arcs.empty())
        r.kind = Elementary::CONICAL;
    else
        r.kind = Elementary::NONELEMENTARY;
    return r;
}

} // namespace adskit
