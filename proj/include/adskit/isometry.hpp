#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "charts.hpp"
#include "quadspace.hpp"

namespace adskit {

using Cplx = std::complex<double>;

inline Cplx mobius(const Mat2& m, Cplx z) { return (m.a * z + m.b) / (m.c * z + m.d); }

// action of a matrix on the line through (cos t, sin t), returned as an angle in [0, pi)
inline double act_on_line(const Mat2& m, double t) {
    double x = std::cos(t), y = std::sin(t);
    return wrap_half(std::atan2(m.c * x + m.d * y, m.a * x + m.b * y));
}

inline Mat2 rotation(double t) { return {std::cos(t), std::sin(t), -std::sin(t), std::cos(t)}; }

// ---------------------------------------------------------------- classification

enum class ElementType { IDENTITY, ELLIPTIC, PARABOLIC, HYPERBOLIC };

inline const char* to_string(ElementType t) {
    switch (t) {
    case ElementType::IDENTITY: return "IDENTITY";
    case ElementType::ELLIPTIC: return "ELLIPTIC";
    case ElementType::PARABOLIC: return "PARABOLIC";
    case ElementType::HYPERBOLIC: return "HYPERBOLIC";
    }
    return "?";
}

struct ElementClass {
    ElementType type = ElementType::IDENTITY;
    double angle = 0;  // elliptic: signed rotation angle omega with R_omega = cos I + sin J
    double length = 0; // hyperbolic: translation length in H^2
};

inline void check_unimodular(const Mat2& m, double tol = 1e-9) {
    if (!(std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) && std::isfinite(m.d)))
        throw Error(ErrorCode::InvalidInput, "non-finite matrix");
    if (std::abs(m.det() - 1.0) > tol * std::max(1.0, max_abs(m) * max_abs(m)))
        throw Error(ErrorCode::InvalidInput, "matrix is not unimodular");
}

inline ElementClass classify_element(const Mat2& m, double eps_tr = default_tolerances().eps_tr) {
    check_unimodular(m);
    ElementClass c;
    double t = m.tr();
    double at = std::abs(t);
    Mat2 s = t >= 0 ? m : -1.0 * m;
    if (max_abs_diff(s, Mat2::identity()) <= eps_tr) {
        c.type = ElementType::IDENTITY;
        return c;
    }
    if (at > 2 + eps_tr) {
        c.type = ElementType::HYPERBOLIC;
        c.length = 2 * std::acosh(at / 2);
    } else if (at >= 2 - eps_tr) {
        c.type = ElementType::PARABOLIC;
    } else {
        c.type = ElementType::ELLIPTIC;
        c.angle = (m.b >= 0 ? 1.0 : -1.0) * std::acos(t / 2);
    }
    return c;
}

struct FixedPoints {
    double attractive = 0; // angle mod pi of the line
    double repulsive = 0;
    bool parabolic = false;
};

inline std::array<double, 2> eigenvector(const Mat2& m, double lambda) {
    std::array<double, 2> v1{m.b, lambda - m.a}, v2{lambda - m.d, m.c};
    double n1 = std::hypot(v1[0], v1[1]), n2 = std::hypot(v2[0], v2[1]);
    auto v = n1 >= n2 ? v1 : v2;
    double n = std::max(n1, n2);
    return {v[0] / n, v[1] / n};
}

inline FixedPoints fixed_points(const Mat2& m, double eps_tr = default_tolerances().eps_tr) {
    auto c = classify_element(m, eps_tr);
    if (c.type == ElementType::ELLIPTIC) throw Error(ErrorCode::EllipticNoFixedPoint, "elliptic element");
    if (c.type == ElementType::IDENTITY) throw Error(ErrorCode::InvalidInput, "identity fixes every direction");
    Mat2 s = m.tr() >= 0 ? m : -1.0 * m;
    FixedPoints f;
    if (c.type == ElementType::PARABOLIC) {
        auto v = eigenvector(s, 1.0);
        f.parabolic = true;
        f.attractive = f.repulsive = wrap_half(std::atan2(v[1], v[0]));
        return f;
    }
    double t = s.tr(), r = std::sqrt(t * t - 4);
    double big = 0.5 * (t + r), small = 1.0 / big;
    auto va = eigenvector(s, big), vr = eigenvector(s, small);
    f.attractive = wrap_half(std::atan2(va[1], va[0]));
    f.repulsive = wrap_half(std::atan2(vr[1], vr[0]));
    return f;
}

// ---------------------------------------------------------------- universal cover of SL(2,R)

// Element of the universal cover: matrix plus continuous angle theta = arg((a+d) + i(b-c)) mod 2pi.
// Through X <-> to_matrix this is exactly the conformal time of the AdS point.
struct CoverElement {
    Mat2 m;
    double theta = 0;
};

inline double zeta_arg(const Mat2& m) { return std::atan2(m.b - m.c, m.a + m.d); }

// canonical lift: the exponential one for tr >= 2 and elliptics, shifted by the central half turn for tr <= -2
inline CoverElement lift(const Mat2& m) {
    double t = m.tr();
    double a = zeta_arg(m);
    if (t <= -2) {
        // principal argument lies near pi; choose it in (pi/2, 3pi/2]
        a = wrap_2pi(a);
        if (a <= kPi / 2) a += kTwoPi;
    }
    return {m, a};
}

inline CoverElement operator*(const CoverElement& x, const CoverElement& y) {
    Mat2 p = x.m * y.m;
    double j = std::round(y.theta / kPi);
    double base = x.theta + j * kPi;
    return {p, base + wrap_pi(zeta_arg(p) - base)};
}

inline CoverElement inverse(const CoverElement& x) { return {x.m.adj(), -x.theta}; }

// central element over -I: the Galois generator delta on the universal cover of AdS
inline CoverElement central(long n) {
    Mat2 m = n % 2 == 0 ? Mat2::identity() : Mat2{-1, 0, 0, -1};
    return {m, n * kPi};
}

inline CoverElement cover_point(const ConfPoint& p) {
    Vec22 q = conf_to_quadric(p);
    return {to_matrix(q), p.theta};
}

inline ConfPoint cover_to_conf(const CoverElement& x) {
    return quadric_to_conf(from_matrix(x.m), x.theta);
}

// ---------------------------------------------------------------- isometries

// (Lift(gl), Lift(gr) delta^{2k}) acting by X -> gl X gr^{-1}; k counts deck transformations.
struct AdsIsometry {
    Mat2 gl, gr;
    long k = 0;

    CoverElement left() const { return lift(gl); }
    CoverElement right() const { return lift(gr) * central(2 * k); }
};

inline AdsIsometry from_cover(const CoverElement& L, const CoverElement& R);

inline AdsIsometry make_isometry(const Mat2& gl, const Mat2& gr, long k = 0) {
    check_unimodular(gl);
    check_unimodular(gr);
    AdsIsometry g{gl, gr, k};
    bool flip = gl.tr() < 0;
    if (gl.tr() == 0) {
        double first = gl.a != 0 ? gl.a : gl.b != 0 ? gl.b : gl.c != 0 ? gl.c : gl.d;
        flip = first < 0;
    }
    if (!flip) return g;
    // multiply both factors by the central half turn and re-read k
    CoverElement L = g.left() * central(1), R = g.right() * central(1);
    return from_cover(L, R);
}

inline AdsIsometry from_cover(const CoverElement& L, const CoverElement& R) {
    double jl = (L.theta - lift(L.m).theta) / kTwoPi;
    double jr = (R.theta - lift(R.m).theta) / kTwoPi;
    long k = std::lround(jr - jl);
    AdsIsometry g{L.m, R.m, k};
    bool flip = L.m.tr() < 0;
    if (L.m.tr() == 0) {
        double first = L.m.a != 0 ? L.m.a : L.m.b != 0 ? L.m.b : L.m.c != 0 ? L.m.c : L.m.d;
        flip = first < 0;
    }
    if (flip) return from_cover(L * central(1), R * central(1));
    return g;
}

inline AdsIsometry identity_isometry() { return {Mat2::identity(), Mat2::identity(), 0}; }

inline AdsIsometry compose(const AdsIsometry& a, const AdsIsometry& b) {
    return from_cover(a.left() * b.left(), a.right() * b.right());
}

inline AdsIsometry inverse(const AdsIsometry& a) { return from_cover(inverse(a.left()), inverse(a.right())); }

inline AdsIsometry power(const AdsIsometry& a, long n) {
    AdsIsometry base = n >= 0 ? a : inverse(a);
    CoverElement L{Mat2::identity(), 0}, R{Mat2::identity(), 0};
    for (long i = 0; i < std::abs(n); ++i) {
        L = L * base.left();
        R = R * base.right();
    }
    return from_cover(L, R);
}

// linear action on E (ignores k)
inline Vec22 act_linear(const AdsIsometry& g, const Vec22& p) {
    return from_matrix(g.gl * to_matrix(p) * g.gr.adj());
}

inline Vec22 act_on_ads(const AdsIsometry& g, const Vec22& p) {
    if (std::abs(q_form(p) + 1.0) > 1e-9 * std::max(1.0, euclid_dot(p, p)))
        throw Error(ErrorCode::NotOnQuadric, "q_form(p) != -1");
    return act_linear(g, p);
}

inline SPoint act_on_ray(const AdsIsometry& g, const SPoint& p) {
    SPoint s = classify_ray(act_linear(g, p.rep));
    s.cls = p.cls;
    return s;
}

inline CoverElement act_on_cover(const AdsIsometry& g, const CoverElement& x) {
    return g.left() * x * inverse(g.right());
}

inline ConfPoint act_on_conf(const AdsIsometry& g, const ConfPoint& p) {
    return cover_to_conf(act_on_cover(g, cover_point(p)));
}

// boundary lift: time branch read off a nearby interior point
inline ConfPoint act_on_boundary_lift(const AdsIsometry& g, const ConfPoint& b) {
    double phi = conf_phi(b);
    ConfPoint near = conf_polar(kPi / 2 - 1e-4, phi, b.theta);
    ConfPoint w = act_on_conf(g, near);
    Vec22 x{std::cos(b.theta), std::sin(b.theta), std::cos(phi), std::sin(phi)};
    Vec22 y = act_linear(g, x);
    double R = std::hypot(y.x1, y.x2);
    return conf_boundary(std::atan2(y.x2 / R, y.x1 / R), lift_into_window(std::atan2(y.v, y.u), w.theta));
}

inline Rp1Pair act_on_boundary(const AdsIsometry& g, const Rp1Pair& b) {
    return {act_on_line(g.gl, b.l), act_on_line(g.gr, b.r)};
}

inline Eigen::Matrix4d to_matrix4(const AdsIsometry& g) {
    Eigen::Matrix4d M;
    for (int j = 0; j < 4; ++j) {
        Vec22 e;
        e[j] = 1;
        Vec22 c = act_linear(g, e);
        for (int i = 0; i < 4; ++i) M(i, j) = c[i];
    }
    return M;
}

// ---------------------------------------------------------------- synchronization

enum class SyncCase {
    IDENTITY,
    HYPERBOLIC_TRANSLATION,
    PARABOLIC_TRANSLATION,
    HYP_HYP,
    PAR_HYP,
    PAR_PAR,
    ELLIPTIC,
    NONE
};

inline const char* to_string(SyncCase c) {
    switch (c) {
    case SyncCase::IDENTITY: return "IDENTITY";
    case SyncCase::HYPERBOLIC_TRANSLATION: return "HYPERBOLIC_TRANSLATION";
    case SyncCase::PARABOLIC_TRANSLATION: return "PARABOLIC_TRANSLATION";
    case SyncCase::HYP_HYP: return "HYP_HYP";
    case SyncCase::PAR_HYP: return "PAR_HYP";
    case SyncCase::PAR_PAR: return "PAR_PAR";
    case SyncCase::ELLIPTIC: return "ELLIPTIC";
    case SyncCase::NONE: return "NONE";
    }
    return "?";
}

struct SyncReport {
    bool synchronized = false;
    SyncCase tag = SyncCase::NONE;
    ElementClass left, right;
    std::string reason;
};

inline SyncReport is_synchronized(const AdsIsometry& g0, double eps_tr = default_tolerances().eps_tr,
                                  double eps_angle = 1e-9) {
    AdsIsometry g = make_isometry(g0.gl, g0.gr, g0.k);
    SyncReport r;
    r.left = classify_element(g.gl, eps_tr);
    r.right = classify_element(g.gr, eps_tr);
    bool el = r.left.type == ElementType::ELLIPTIC, er = r.right.type == ElementType::ELLIPTIC;
    if (el && er) {
        if (g.k != 0) {
            r.reason = "elliptic factors differ by a central element";
            return r;
        }
        if (std::abs(r.left.angle - r.right.angle) <= eps_angle) {
            r.synchronized = true;
            r.tag = SyncCase::ELLIPTIC;
        } else {
            r.reason = "elliptic factors are not conjugate";
        }
        return r;
    }
    if (el || er) {
        r.reason = "exactly one factor is elliptic";
        return r;
    }
    if (g.k != 0) {
        r.reason = "nontrivial central factor";
        return r;
    }
    if (g.gr.tr() < 0) {
        r.reason = "right factor carries the central half turn";
        return r;
    }
    auto t = [](ElementType e) { return e == ElementType::IDENTITY ? 0 : e == ElementType::PARABOLIC ? 1 : 2; };
    int a = t(r.left.type), b = t(r.right.type);
    if (a > b) std::swap(a, b);
    static const SyncCase table[3][3] = {
        {SyncCase::IDENTITY, SyncCase::PARABOLIC_TRANSLATION, SyncCase::HYPERBOLIC_TRANSLATION},
        {SyncCase::NONE, SyncCase::PAR_PAR, SyncCase::PAR_HYP},
        {SyncCase::NONE, SyncCase::NONE, SyncCase::HYP_HYP}};
    r.synchronized = true;
    r.tag = table[a][b];
    return r;
}

// ---------------------------------------------------------------- affine domains

// A(y) = {x : <x|y> < 0} in the component of y: |theta - theta_y| < acos(a . s'), a = w_y / R_y
inline bool affine_domains_intersect(const CoverElement& x, const CoverElement& y) {
    Vec22 X = from_matrix(x.m), Y = from_matrix(y.m);
    double Rx = std::hypot(X.u, X.v), Ry = std::hypot(Y.u, Y.v);
    double ax = X.x1 / Rx, ay = X.x2 / Rx, bx = Y.x1 / Ry, by = Y.x2 / Ry;
    double dt = std::abs(x.theta - y.theta);
    if (dt < kPi) return true; // the maximum below is never smaller than pi
    auto f = [&](double psi) {
        double c = std::cos(psi), s = std::sin(psi);
        return std::acos(std::clamp(ax * c + ay * s, -1.0, 1.0)) + std::acos(std::clamp(bx * c + by * s, -1.0, 1.0));
    };
    const int N = 720;
    double best = -1, bpsi = 0;
    for (int i = 0; i < N; ++i) {
        double psi = kTwoPi * i / N, v = f(psi);
        if (v > best) {
            best = v;
            bpsi = psi;
        }
    }
    double lo = bpsi - kTwoPi / N, hi = bpsi + kTwoPi / N;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 60; ++it) {
        double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        if (f(m1) > f(m2))
            hi = m2;
        else
            lo = m1;
    }
    best = std::max(best, f(0.5 * (lo + hi)));
    return dt < best;
}

namespace detail {

// h with h^{-1} m h upper triangular (non-elliptic) or a rotation (elliptic), det h = 1
inline Mat2 normal_form_conjugator(const Mat2& m, double eps_tr) {
    auto c = classify_element(m, eps_tr);
    Mat2 s = m.tr() >= 0 ? m : -1.0 * m;
    switch (c.type) {
    case ElementType::IDENTITY: return Mat2::identity();
    case ElementType::HYPERBOLIC: {
        double t = s.tr(), r = std::sqrt(t * t - 4);
        auto v1 = eigenvector(s, 0.5 * (t + r)), v2 = eigenvector(s, 2.0 / (t + r));
        Mat2 h{v1[0], v2[0], v1[1], v2[1]};
        if (h.det() < 0) h = {v1[0], -v2[0], v1[1], -v2[1]};
        double d = std::sqrt(h.det());
        return {h.a / d, h.b / d, h.c / d, h.d / d};
    }
    case ElementType::PARABOLIC: {
        auto v = eigenvector(s, 1.0);
        return {v[0], -v[1], v[1], v[0]};
    }
    case ElementType::ELLIPTIC: {
        // fixed point z0 in the upper half plane, h maps i to z0
        double disc = 4 - m.tr() * m.tr();
        Cplx z0 = Cplx(m.a - m.d, std::sqrt(std::max(0.0, disc))) / (2 * m.c);
        if (z0.imag() < 0) z0 = std::conj(z0);
        double x = z0.real(), y = z0.imag(), sy = std::sqrt(y);
        return {sy, x / sy, 0, 1 / sy};
    }
    }
    return Mat2::identity();
}

} // namespace detail

// Searches affine domains A(c), c in {id, h_L h_R^{-1}}, with g^n A(c) meeting A(c) for all |n| <= n_max.
inline bool affine_recurrence_test(const AdsIsometry& g, int n_max, double eps_tr = default_tolerances().eps_tr) {
    std::vector<Mat2> centers = {Mat2::identity()};
    try {
        Mat2 hl = detail::normal_form_conjugator(g.gl, eps_tr), hr = detail::normal_form_conjugator(g.gr, eps_tr);
        centers.push_back(hl * hr.adj());
    } catch (const Error&) {
    }
    CoverElement L = g.left(), R = g.right();
    CoverElement Li = inverse(L), Ri = inverse(R);
    for (const auto& cm : centers) {
        CoverElement c = lift(cm);
        bool ok = true;
        CoverElement fwd = c, bwd = c;
        for (int n = 1; n <= n_max && ok; ++n) {
            fwd = L * fwd * Ri;
            bwd = Li * bwd * R;
            ok = affine_domains_intersect(fwd, c) && affine_domains_intersect(bwd, c);
        }
        if (ok) return true;
    }
    return false;
}

} // namespace adskit
