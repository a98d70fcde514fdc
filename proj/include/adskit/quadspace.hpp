#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "config.hpp"

namespace adskit {

// A vector of E = R^{2,2}, coordinates (u, v, x1, x2).
struct Vec22 {
    double u = 0, v = 0, x1 = 0, x2 = 0;

    constexpr Vec22() = default;
    constexpr Vec22(double u_, double v_, double a, double b) : u(u_), v(v_), x1(a), x2(b) {}

    double& operator[](int i) { return i == 0 ? u : i == 1 ? v : i == 2 ? x1 : x2; }
    double operator[](int i) const { return i == 0 ? u : i == 1 ? v : i == 2 ? x1 : x2; }

    Vec22& operator+=(const Vec22& o) { u += o.u; v += o.v; x1 += o.x1; x2 += o.x2; return *this; }
    Vec22& operator-=(const Vec22& o) { u -= o.u; v -= o.v; x1 -= o.x1; x2 -= o.x2; return *this; }
    Vec22& operator*=(double s) { u *= s; v *= s; x1 *= s; x2 *= s; return *this; }
};

inline Vec22 operator+(Vec22 a, const Vec22& b) { return a += b; }
inline Vec22 operator-(Vec22 a, const Vec22& b) { return a -= b; }
inline Vec22 operator-(const Vec22& a) { return {-a.u, -a.v, -a.x1, -a.x2}; }
inline Vec22 operator*(double s, Vec22 a) { return a *= s; }
inline Vec22 operator*(Vec22 a, double s) { return a *= s; }
inline Vec22 operator/(Vec22 a, double s) { return a *= 1.0 / s; }

inline std::ostream& operator<<(std::ostream& os, const Vec22& p) {
    return os << "(" << p.u << ", " << p.v << ", " << p.x1 << ", " << p.x2 << ")";
}

inline double euclid_dot(const Vec22& a, const Vec22& b) {
    return a.u * b.u + a.v * b.v + a.x1 * b.x1 + a.x2 * b.x2;
}
inline double euclid_norm(const Vec22& a) { return std::sqrt(euclid_dot(a, a)); }
inline bool is_finite(const Vec22& a) {
    return std::isfinite(a.u) && std::isfinite(a.v) && std::isfinite(a.x1) && std::isfinite(a.x2);
}

inline double q_form(const Vec22& p) { return -p.u * p.u - p.v * p.v + p.x1 * p.x1 + p.x2 * p.x2; }

inline double q_pair(const Vec22& p, const Vec22& q) {
    return -p.u * q.u - p.v * q.v + p.x1 * q.x1 + p.x2 * q.x2;
}

// pairing of Euclidean-normalized representatives
inline double q_pair_unit(const Vec22& p, const Vec22& q) {
    return q_pair(p, q) / (euclid_norm(p) * euclid_norm(q));
}

// Linear functional a(y) = a0 u + a1 v + a2 x1 + a3 x2.
struct Covector {
    std::array<double, 4> c{0, 0, 0, 0};
    double operator()(const Vec22& y) const { return c[0] * y.u + c[1] * y.v + c[2] * y.x1 + c[3] * y.x2; }
};

inline Covector flat(const Vec22& p) { return Covector{{-p.u, -p.v, p.x1, p.x2}}; }
inline Vec22 sharp(const Covector& a) { return {-a.c[0], -a.c[1], a.c[2], a.c[3]}; }
// dual quadratic form Q*
inline double q_dual(const Covector& a) {
    return -a.c[0] * a.c[0] - a.c[1] * a.c[1] + a.c[2] * a.c[2] + a.c[3] * a.c[3];
}

enum class RayClass { ADS_INTERIOR, EIN2, EXTERIOR };

inline const char* to_string(RayClass c) {
    switch (c) {
    case RayClass::ADS_INTERIOR: return "ADS_INTERIOR";
    case RayClass::EIN2: return "EIN2";
    case RayClass::EXTERIOR: return "EXTERIOR";
    }
    return "?";
}

// A point of S(E): ray through a nonzero vector.
struct SPoint {
    Vec22 rep;
    RayClass cls = RayClass::ADS_INTERIOR;
};

inline SPoint classify_ray(const Vec22& p, double eps_q = default_tolerances().eps_q) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidInput, "non-finite vector");
    double n = euclid_norm(p);
    if (n == 0.0) throw Error(ErrorCode::ZeroVector, "ray through the zero vector");
    SPoint s;
    s.rep = p / n;
    double q = q_form(s.rep);
    s.cls = q < -eps_q ? RayClass::ADS_INTERIOR : (q > eps_q ? RayClass::EXTERIOR : RayClass::EIN2);
    return s;
}

inline SPoint antipode(const SPoint& p) { return SPoint{-p.rep, p.cls}; }

// Matrix model: E is identified with gl(2,R) so that -det = Q.
// X = [[u + x1, x2 + v], [x2 - v, u - x1]].
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    static constexpr Mat2 identity() { return {1, 0, 0, 1}; }
    double det() const { return a * d - b * c; }
    double tr() const { return a + d; }
    Mat2 inverse() const {
        double D = det();
        return {d / D, -b / D, -c / D, a / D};
    }
    // inverse of a unimodular matrix
    Mat2 adj() const { return {d, -b, -c, a}; }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
inline Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
inline Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
inline double max_abs_diff(const Mat2& x, const Mat2& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}
inline double max_abs(const Mat2& x) {
    return std::max({std::abs(x.a), std::abs(x.b), std::abs(x.c), std::abs(x.d)});
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

inline Mat2 to_matrix(const Vec22& p) { return {p.u + p.x1, p.x2 + p.v, p.x2 - p.v, p.u - p.x1}; }
inline Vec22 from_matrix(const Mat2& m) {
    return {(m.a + m.d) / 2, (m.b - m.c) / 2, (m.a - m.d) / 2, (m.b + m.c) / 2};
}

// Dual domain {v : <v|x> < 0 for all x}; margin is the largest unit pairing.
struct DualConvex {
    std::vector<Vec22> points;

    double margin(const Vec22& q) const {
        double m = -std::numeric_limits<double>::infinity();
        double nq = euclid_norm(q);
        for (const auto& x : points) m = std::max(m, q_pair(q, x) / (nq * euclid_norm(x)));
        return m;
    }
    bool contains(const Vec22& q, double eps = default_tolerances().eps_q) const { return margin(q) < -eps; }
};

inline DualConvex dual_convex(const std::vector<SPoint>& pts) {
    DualConvex d;
    d.points.reserve(pts.size());
    for (const auto& p : pts) d.points.push_back(p.rep);
    return d;
}

} // namespace adskit
