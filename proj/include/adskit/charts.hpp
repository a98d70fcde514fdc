#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lp.hpp"
#include "quadspace.hpp"

namespace adskit {

using S2 = std::array<double, 3>;

inline double dot3(const S2& a, const S2& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline S2 normalized3(const S2& a) {
    double n = std::sqrt(dot3(a, a));
    return {a[0] / n, a[1] / n, a[2] / n};
}

// great-circle distance, accurate for nearby and nearly antipodal points
inline double sphere_distance(const S2& a, const S2& b) {
    S2 c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    return std::atan2(std::sqrt(dot3(c, c)), dot3(a, b));
}

// Point of the closed hemisphere {s2 >= 0} times the real line (universal cover time).
// The pole O = (0,0,1) is the center of the disc; s2 = 0 is the conformal boundary.
struct ConfPoint {
    S2 s{0, 0, 1};
    double theta = 0;
};

inline constexpr S2 kPole{0, 0, 1};

inline ConfPoint conf_polar(double rho, double phi, double theta) {
    return {{std::sin(rho) * std::cos(phi), std::sin(rho) * std::sin(phi), std::cos(rho)}, theta};
}

inline ConfPoint conf_boundary(double phi, double theta) { return {{std::cos(phi), std::sin(phi), 0.0}, theta}; }

inline double conf_phi(const ConfPoint& p) { return std::atan2(p.s[1], p.s[0]); }

inline bool is_boundary(const ConfPoint& p, double eps = default_tolerances().eps_boundary) {
    return p.s[2] < eps;
}

// The induced metric on the hemisphere chart is (ds^2 - dtheta^2) / cos^2(d(s, O)), tan d(s,O) = sinh r.
inline Vec22 conf_to_quadric(const ConfPoint& p, double eps = default_tolerances().eps_boundary) {
    if (p.s[2] < eps) throw Error(ErrorCode::BoundaryPoint, "conformal point lies on the boundary");
    double k = 1.0 / p.s[2];
    return {std::cos(p.theta) * k, std::sin(p.theta) * k, p.s[0] * k, p.s[1] * k};
}

// lift the angle a into [window - pi, window + pi)
inline double lift_into_window(double a, double window) {
    double r = a - window;
    r = r - kTwoPi * std::floor((r + kPi) / kTwoPi);
    return window + r;
}

inline ConfPoint quadric_to_conf(const Vec22& q, double window, double eps = 1e-8) {
    double Q = q_form(q);
    if (!(std::abs(Q + 1.0) <= eps * std::max(1.0, euclid_dot(q, q))))
        throw Error(ErrorCode::NotOnQuadric, "q_form(q) != -1");
    double R = std::hypot(q.u, q.v);
    ConfPoint p;
    p.s = normalized3({q.x1 / R, q.x2 / R, 1.0 / R});
    p.theta = lift_into_window(std::atan2(q.v, q.u), window);
    return p;
}

// Klein representative (radial projection in S(E)); valid for interior and boundary points.
inline SPoint conf_to_ray(const ConfPoint& p) {
    return classify_ray({std::cos(p.theta), std::sin(p.theta), p.s[0], p.s[1]});
}

inline ConfPoint ray_to_conf(const Vec22& rep, double window, double eps = 1e-9) {
    double R = std::hypot(rep.u, rep.v);
    double n = euclid_norm(rep);
    if (!(R > 0.5 * n * std::sqrt(eps)))
        throw Error(ErrorCode::InvalidInput, "ray is exterior to the closed AdS region");
    double a = rep.x1 / R, b = rep.x2 / R;
    double rr = a * a + b * b;
    if (rr > 1.0 + eps) throw Error(ErrorCode::InvalidInput, "ray is exterior to the closed AdS region");
    ConfPoint p;
    p.s = normalized3({a, b, std::sqrt(std::max(0.0, 1.0 - rr))});
    p.theta = lift_into_window(std::atan2(rep.v, rep.u), window);
    return p;
}

// n-fold Galois translation (s, theta) -> (rotation of s by n*pi about O, theta + n pi).
inline ConfPoint apply_delta(const ConfPoint& p, long n) {
    ConfPoint q = p;
    if (n % 2 != 0) {
        q.s[0] = -q.s[0];
        q.s[1] = -q.s[1];
    }
    q.theta += static_cast<double>(n) * kPi;
    return q;
}

// RP1 x RP1 model of the Einstein universe: l = [image], r = [kernel] of the rank-one matrix.
struct Rp1Pair {
    double l = 0; // angle of the image line, in [0, pi)
    double r = 0; // angle of the kernel line, in [0, pi)
};

inline Rp1Pair ein2_to_rp1pair(const SPoint& p, double eps = 1e-8) {
    if (std::abs(q_form(p.rep)) > eps * euclid_dot(p.rep, p.rep))
        throw Error(ErrorCode::NotOnEin2, "point is not on Ein2");
    Mat2 X = to_matrix(p.rep);
    double c0 = std::hypot(X.a, X.c), c1 = std::hypot(X.b, X.d);
    double l = c0 >= c1 ? std::atan2(X.c, X.a) : std::atan2(X.d, X.b);
    double r0 = std::hypot(X.a, X.b), r1 = std::hypot(X.c, X.d);
    double r = r0 >= r1 ? std::atan2(X.a, -X.b) : std::atan2(X.c, -X.d);
    return {wrap_half(l), wrap_half(r)};
}

inline SPoint rp1pair_to_ein2(const Rp1Pair& b) {
    double el0 = std::cos(b.l), el1 = std::sin(b.l);
    double w0 = -std::sin(b.r), w1 = std::cos(b.r); // row annihilating the kernel
    Mat2 X{el0 * w0, el0 * w1, el1 * w0, el1 * w1};
    SPoint s = classify_ray(from_matrix(X));
    s.cls = RayClass::EIN2;
    return s;
}

inline bool affine_domain_contains(const SPoint& center, const SPoint& p,
                                   double eps_q = default_tolerances().eps_q) {
    if (center.cls != RayClass::ADS_INTERIOR)
        throw Error(ErrorCode::InvalidInput, "affine domain center must be in AdS");
    return q_pair_unit(center.rep, p.rep) < -eps_q;
}

struct DesitterWitness {
    bool found = false;
    Vec22 witness;        // Q(witness) = -1 when found
    double margin = 0;    // max over witnesses of min_i -<v|x_i> (unit reps)
    Vec22 best;           // best candidate even if the margin is not positive
};

namespace detail {

// max t over w in an inscribed 16-gon of radius 0.999, with <(cos a, sin a, w)|x_i> + t <= 0
inline std::pair<double, std::array<double, 2>> desitter_lp(const std::vector<Vec22>& X, double alpha) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    for (const auto& x : X) {
        A.push_back({x.x1, x.x2, 1.0});
        b.push_back(ca * x.u + sa * x.v);
    }
    const int K = 16;
    const double apothem = 0.999 * std::cos(kPi / K);
    for (int k = 0; k < K; ++k) {
        double a = kTwoPi * k / K;
        A.push_back({std::cos(a), std::sin(a), 0.0});
        b.push_back(apothem);
    }
    A.push_back({0.0, 0.0, 1.0});
    b.push_back(2.0);
    LpResult r = solve_lp_free(A, b, {0.0, 0.0, 1.0});
    if (r.status != LpResult::OPTIMAL) return {-1e300, {0, 0}};
    return {r.x[2], {r.x[0], r.x[1]}};
}

} // namespace detail

// Timelike v with <v|x> < 0 for every input (unit representatives), by an LP over the
// de Sitter slice v = (cos a, sin a, w), |w| < 1, scanned in a.
inline DesitterWitness desitter_domain_find(const std::vector<SPoint>& points,
                                            double eps_q = default_tolerances().eps_q) {
    DesitterWitness out;
    if (points.empty()) return out;
    std::vector<Vec22> X;
    for (const auto& p : points) X.push_back(p.rep / euclid_norm(p.rep));
    auto score = [&](double a) {
        auto [t, w] = detail::desitter_lp(X, a);
        double nv = std::sqrt(1.0 + w[0] * w[0] + w[1] * w[1]);
        return std::make_pair(t / nv, w);
    };
    const int G = 72;
    double best_a = 0, best_t = -1e300;
    std::array<double, 2> best_w{0, 0};
    for (int k = 0; k < G; ++k) {
        double a = kTwoPi * k / G;
        auto [t, w] = score(a);
        if (t > best_t) {
            best_t = t;
            best_a = a;
            best_w = w;
        }
    }
    // golden-section refinement around the best grid angle
    double lo = best_a - kTwoPi / G, hi = best_a + kTwoPi / G;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    auto f1 = score(x1), f2 = score(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1.first > f2.first) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = score(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = score(x2);
        }
    }
    for (const auto& [a, f] : {std::make_pair(x1, f1), std::make_pair(x2, f2)})
        if (f.first > best_t) {
            best_t = f.first;
            best_a = a;
            best_w = f.second;
        }
    Vec22 v{std::cos(best_a), std::sin(best_a), best_w[0], best_w[1]};
    out.margin = best_t;
    out.best = v / std::sqrt(-q_form(v));
    if (best_t > eps_q) {
        out.found = true;
        out.witness = out.best;
    }
    return out;
}

// Lift boundary rays to the universal cover using a (closure) de Sitter witness: each lift
// lies within pi of the witness time.
inline std::vector<ConfPoint> lift_boundary_rays(const std::vector<SPoint>& points, const Vec22& witness) {
    double alpha = std::atan2(witness.v, witness.u);
    std::vector<ConfPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        const Vec22& x = p.rep;
        double R = std::hypot(x.x1, x.x2);
        if (!(R > 0)) throw Error(ErrorCode::NotOnEin2, "ray has no boundary direction");
        double th = std::atan2(x.v, x.u);
        out.push_back({{x.x1 / R, x.x2 / R, 0.0}, alpha + wrap_pi(th - alpha)});
    }
    return out;
}

} // namespace adskit
