#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "invisible.hpp"
#include "isometry.hpp"

namespace adskit {

enum class Component { FUTURE, PAST };

// (x, y) with Q(x) = Q(y) = -1, <x|y> = 0: y is a unit timelike tangent vector at x.
struct TPoint {
    Vec22 x, y;
    Component component = Component::FUTURE;
};

struct TTangent {
    Vec22 u, v;
};

// future time direction at x: derivative of the rotation in the (u, v) plane
inline Vec22 time_field(const Vec22& x) { return {-x.v, x.u, 0, 0}; }

inline TPoint make_tpoint(const Vec22& x, const Vec22& y, double tol = 1e-10) {
    double s = std::max({1.0, euclid_dot(x, x), euclid_dot(y, y)});
    if (std::abs(q_form(x) + 1) > tol * s || std::abs(q_form(y) + 1) > tol * s || std::abs(q_pair(x, y)) > tol * s)
        throw Error(ErrorCode::ConstraintViolation, "(x, y) is not a unit timelike tangent pair");
    return {x, y, q_pair(y, time_field(x)) < 0 ? Component::FUTURE : Component::PAST};
}

inline TPoint base_tpoint() { return {{1, 0, 0, 0}, {0, 1, 0, 0}, Component::FUTURE}; }

inline double tangent_defect(const TPoint& p, const TTangent& t) {
    return std::max({std::abs(q_pair(p.x, t.u)), std::abs(q_pair(p.y, t.v)),
                     std::abs(q_pair(p.x, t.v) + q_pair(t.u, p.y))});
}

inline double t_norm(const TPoint& p, const TTangent& t, double tol = 1e-10) {
    double s = std::max({1.0, euclid_norm(t.u) * euclid_norm(p.x), euclid_norm(t.v) * euclid_norm(p.y)});
    if (tangent_defect(p, t) > tol * s) throw Error(ErrorCode::ConstraintViolation, "not a tangent vector");
    return 0.25 * (q_form(t.u) + q_form(t.v));
}

inline double t_pair(const TTangent& a, const TTangent& b) { return 0.25 * (q_pair(a.u, b.u) + q_pair(a.v, b.v)); }

inline TPoint gauss_flow(double t, const TPoint& p) {
    double c = std::cos(t), s = std::sin(t);
    return {c * p.x + s * p.y, -s * p.x + c * p.y, p.component};
}

// differential of the flow (it is linear in (x, y))
inline TTangent gauss_flow_push(double t, const TTangent& v) {
    double c = std::cos(t), s = std::sin(t);
    return {c * v.u + s * v.v, -s * v.u + c * v.v};
}

// Killing field of the flow
inline TTangent flow_field(const TPoint& p) { return {p.y, -1.0 * p.x}; }

inline TPoint act_on_tpoint(const AdsIsometry& g, const TPoint& p) {
    return {act_linear(g, p.x), act_linear(g, p.y), p.component};
}

// ---------------------------------------------------------------- projection to H^2 x H^2

namespace detail {

// fixed point in the upper half plane of an elliptic matrix
inline Cplx elliptic_fixed_point(const Mat2& K) {
    if (std::abs(K.c) < 1e-10) throw Error(ErrorCode::DecompositionFailed, "near-singular decomposition");
    double t = K.tr();
    double disc = 4 - t * t;
    if (!(disc > 0)) throw Error(ErrorCode::DecompositionFailed, "factor is not elliptic");
    Cplx z = Cplx(K.a - K.d, std::sqrt(disc)) / (2 * K.c);
    if (z.imag() < 0) z = std::conj(z);
    return z;
}

inline Cplx fixed_point_derivative(const Mat2& K, Cplx z, const Mat2& dK) {
    return -(dK.c * z * z + (dK.d - dK.a) * z - dK.b) / (2.0 * K.c * z + K.d - K.a);
}

} // namespace detail

struct H2Pair {
    Cplx left, right;
};

// (x, y) = (gL x0 gR^-1, gL y0 gR^-1) with (x0, y0) = (I, J); returns (gL i, gR i)
// as fixed points of Y X^-1 = gL J gL^-1 and X^-1 Y = gR J gR^-1.
inline H2Pair project_h2xh2(const TPoint& p) {
    if (p.component != Component::FUTURE) throw Error(ErrorCode::DecompositionFailed, "past component");
    Mat2 X = to_matrix(p.x), Y = to_matrix(p.y);
    Mat2 Xi = X.adj();
    return {detail::elliptic_fixed_point(Y * Xi), detail::elliptic_fixed_point(Xi * Y)};
}

inline std::array<Cplx, 2> project_differential(const TPoint& p, const TTangent& t) {
    Mat2 X = to_matrix(p.x), Y = to_matrix(p.y), U = to_matrix(t.u), V = to_matrix(t.v);
    Mat2 Xi = X.adj();
    Mat2 KL = Y * Xi, KR = Xi * Y;
    Mat2 dKL = V * Xi - KL * U * Xi;
    Mat2 dKR = Xi * V - Xi * U * Xi * Y;
    Cplx zl = detail::elliptic_fixed_point(KL), zr = detail::elliptic_fixed_point(KR);
    return {detail::fixed_point_derivative(KL, zl, dKL), detail::fixed_point_derivative(KR, zr, dKR)};
}

// hyperbolic squared norm of the image of t in H^2 x H^2
inline double h2xh2_norm(const TPoint& p, const TTangent& t) {
    auto z = project_h2xh2(p);
    auto dz = project_differential(p, t);
    return std::norm(dz[0]) / (z.left.imag() * z.left.imag()) + std::norm(dz[1]) / (z.right.imag() * z.right.imag());
}

// tangent of the curve s -> (exp(sA) x exp(-sB), exp(sA) y exp(-sB)) at s = 0
inline TTangent tangent_from_algebra(const TPoint& p, const Mat2& A, const Mat2& B) {
    Mat2 X = to_matrix(p.x), Y = to_matrix(p.y);
    return {from_matrix(A * X - X * B), from_matrix(A * Y - Y * B)};
}

inline TTangent remove_flow_component(const TPoint& p, const TTangent& t) {
    TTangent Z = flow_field(p);
    double k = t_pair(t, Z) / t_pair(Z, Z);
    return {t.u - k * Z.u, t.v - k * Z.v};
}

// ---------------------------------------------------------------- Gauss maps of surfaces

// vector Q-orthogonal to three vectors
inline Vec22 q_normal(const Vec22& a, const Vec22& b, const Vec22& c) {
    Eigen::Matrix<double, 3, 4> M;
    const Vec22* rows[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
        Covector f = flat(*rows[i]);
        for (int j = 0; j < 4; ++j) M(i, j) = f.c[j];
    }
    Eigen::FullPivLU<Eigen::Matrix<double, 3, 4>> lu(M);
    Eigen::MatrixXd K = lu.kernel();
    Eigen::Vector4d n = K.col(0);
    return {n[0], n[1], n[2], n[3]};
}

inline Vec22 future_unit_normal(const Vec22& x, Vec22 n, double margin) {
    double q = q_form(n);
    if (!(q < -margin * euclid_dot(n, n))) throw Error(ErrorCode::NotSpacelike, "tangent plane is not spacelike");
    n = n / std::sqrt(-q);
    if (q_pair(n, time_field(x)) > 0) n = -1.0 * n;
    return n;
}

struct TriSurface {
    std::vector<Vec22> vertices; // on AdS, Q = -1
    std::vector<std::array<int, 3>> triangles;
};

// per-vertex unit future normals from the incident triangles
inline std::vector<TPoint> gauss_map(const TriSurface& s, double margin = 1e-9) {
    std::size_t n = s.vertices.size();
    std::vector<Vec22> acc(n);
    for (const auto& t : s.triangles) {
        const Vec22& a = s.vertices[t[0]];
        const Vec22& b = s.vertices[t[1]];
        const Vec22& c = s.vertices[t[2]];
        Vec22 nn = q_normal(a, b - a, c - a);
        for (int k = 0; k < 3; ++k) {
            const Vec22& x = s.vertices[t[k]];
            Vec22 local = nn - q_pair(nn, x) / q_form(x) * x;
            acc[t[k]] += future_unit_normal(x, local, margin);
        }
    }
    std::vector<TPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec22& x = s.vertices[i];
        Vec22 m = acc[i] - q_pair(acc[i], x) / q_form(x) * x;
        out.push_back(make_tpoint(x, future_unit_normal(x, m, margin), 1e-8));
    }
    return out;
}

// Gauss map of the graph theta = g(s) by finite differences (step h on the sphere)
inline TPoint gauss_map_graph(const std::function<double(const S2&)>& g, const S2& s, double h = 1e-5,
                              double margin = 1e-9) {
    auto X = [&](const S2& q) { return conf_to_quadric({q, g(q)}); };
    S2 a = std::abs(s[0]) < 0.9 ? S2{1, 0, 0} : S2{0, 1, 0};
    double d = dot3(a, s);
    S2 e1 = normalized3({a[0] - d * s[0], a[1] - d * s[1], a[2] - d * s[2]});
    S2 e2{s[1] * e1[2] - s[2] * e1[1], s[2] * e1[0] - s[0] * e1[2], s[0] * e1[1] - s[1] * e1[0]};
    auto move = [&](const S2& e, double t) {
        return normalized3({s[0] + t * e[0], s[1] + t * e[1], s[2] + t * e[2]});
    };
    Vec22 x = X(s);
    Vec22 d1 = (X(move(e1, h)) - X(move(e1, -h))) / (2 * h);
    Vec22 d2 = (X(move(e2, h)) - X(move(e2, -h))) / (2 * h);
    Vec22 n = q_normal(x, d1, d2);
    return make_tpoint(x, future_unit_normal(x, n, margin), 1e-8);
}

// Gauss graph of a convex surface given by points and support-plane duals.
inline std::vector<TPoint> gauss_graph_convex(const std::vector<Vec22>& xs, const std::vector<Vec22>& ys,
                                              double eps = 1e-9) {
    if (xs.size() != ys.size()) throw Error(ErrorCode::InvalidInput, "size mismatch");
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < ys.size(); ++k)
            if (q_pair(xs[i], ys[k]) > eps) throw Error(ErrorCode::NotConvex, "support inequality fails");
    std::vector<TPoint> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Vec22 x = xs[i] / std::sqrt(-q_form(xs[i]));
        Vec22 y = ys[i] / std::sqrt(-q_form(ys[i]));
        out.push_back(make_tpoint(x, y, 1e-8));
    }
    return out;
}

// min over consecutive pairs of <dx|dy>
inline double curve_uv_min(const std::vector<TPoint>& c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < c.size(); ++i) m = std::min(m, q_pair(c[i].x - c[i - 1].x, c[i].y - c[i - 1].y));
    return m;
}

// ---------------------------------------------------------------- the map p -> (x(p), y(p))

// Support point of Conv(Lambda): y maximizes the timelike distance to p among points of the hull
// in the future of p; cosmological time is pi/2 minus that distance.
class SigmaMap {
public:
    // faces: vertex sets of the hull facets of Conv(Lambda); the optimum lies on the boundary, so
    // supports inside a facet suffice. Without faces every pair and triple is tried.
    explicit SigmaMap(const EnvelopePair& e, const std::vector<std::vector<int>>& faces = {})
        : env_(e), lam_(e.lambdas()) {
        std::size_t n = lam_.size();
        G_.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) G_[i * n + j] = q_pair(lam_[i], lam_[j]);
        std::set<std::array<std::size_t, 2>> pairs;
        std::set<std::array<std::size_t, 3>> triples;
        auto add_set = [&](std::vector<std::size_t> v) {
            std::sort(v.begin(), v.end());
            for (std::size_t a = 0; a < v.size(); ++a)
                for (std::size_t b = a + 1; b < v.size(); ++b) {
                    pairs.insert({v[a], v[b]});
                    for (std::size_t c = b + 1; c < v.size(); ++c) triples.insert({v[a], v[b], v[c]});
                }
        };
        if (faces.empty()) {
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = i;
            add_set(all);
        } else {
            for (const auto& f : faces) add_set(std::vector<std::size_t>(f.begin(), f.end()));
        }
        pairs_.assign(pairs.begin(), pairs.end());
        for (const auto& id : triples) {
            Eigen::Matrix3d M;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) M(a, b) = G_[id[a] * n + id[b]];
            if (std::abs(M.determinant()) < 1e-12) continue;
            triples_.push_back({id, M.inverse()});
        }
    }

    explicit SigmaMap(const AchronalSet& s) : SigmaMap(build_envelopes(s), hull_faces(s)) {}

    static std::vector<std::vector<int>> hull_faces(const AchronalSet& s) {
        if (!s.generic) return {};
        PatchHull ph = convex_hull_patch(s.rays(), SPoint{s.witness.witness, RayClass::ADS_INTERIOR});
        if (ph.hull.dim < 3) return {};
        std::vector<std::vector<int>> out;
        for (const auto& f : ph.hull.facets) out.push_back(f.verts);
        return out;
    }

    struct Result {
        bool found = false; // false when no hull point lies in the future of p
        Vec22 y;            // unit, Q = -1
        double tau = kPi / 2;
    };

    Result support(const Vec22& p) const {
        std::size_t n = lam_.size();
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = -q_pair(p, lam_[i]);
        Vec22 T = time_field(p);
        Result r;
        double best = 0;
        auto consider = [&](const Vec22& Y) {
            double v = -q_form(Y);
            if (!(v > best)) return;
            if (!(q_pair(Y, T) < 0)) return;
            best = v;
            r.found = true;
            r.y = Y;
        };
        for (const auto& [i, j] : pairs_) {
            if (!(G_[i * n + j] < 0)) continue;
            consider((0.5 / c[i]) * lam_[i] + (0.5 / c[j]) * lam_[j]);
        }
        for (const auto& t : triples_) {
            Eigen::Vector3d cc(c[t.id[0]], c[t.id[1]], c[t.id[2]]);
            Eigen::Vector3d a = t.inv * cc;
            double den = cc.dot(a);
            if (!(std::abs(den) > 1e-300)) continue;
            a /= den;
            if (a.minCoeff() < 0) continue;
            consider(a[0] * lam_[t.id[0]] + a[1] * lam_[t.id[1]] + a[2] * lam_[t.id[2]]);
        }
        if (r.found) {
            r.y = r.y / std::sqrt(-q_form(r.y));
            double cosd = std::clamp(-q_pair(p, r.y), -1.0, 1.0);
            r.tau = kPi / 2 - std::acos(cosd);
        }
        return r;
    }

    double tau(const ConfPoint& p) const { return support(conf_to_quadric(p)).tau; }

    // point of the level set tau = level on the vertical line over s
    std::optional<ConfPoint> level_point(const S2& s, double level = kPi / 4) const {
        double lo = env_.f_minus(s), hi = env_.f_plus(s);
        if (!(hi > lo)) return std::nullopt;
        double a = lo + 1e-12 * (hi - lo), b = hi - 1e-12 * (hi - lo);
        if (tau({s, a}) > level || tau({s, b}) < level) return std::nullopt;
        for (int it = 0; it < 48; ++it) {
            double m = 0.5 * (a + b);
            (tau({s, m}) < level ? a : b) = m;
        }
        return ConfPoint{s, 0.5 * (a + b)};
    }

    // (x(p), y(p)) with p on the timelike geodesic from x to y, d(x, y) = pi/2
    TPoint pair(const Vec22& p) const {
        Result r = support(p);
        if (!r.found) throw Error(ErrorCode::OutsideDomain, "point is not in the past of C+");
        double c = -q_pair(p, r.y);
        Vec22 x = (p + q_pair(p, r.y) * r.y) / std::sqrt(std::max(1e-300, 1 - c * c));
        return {x, r.y, Component::FUTURE};
    }

    const EnvelopePair& envelopes() const { return env_; }

private:
    struct Triple {
        std::array<std::size_t, 3> id;
        Eigen::Matrix3d inv;
    };
    EnvelopePair env_;
    std::vector<Vec22> lam_;
    std::vector<double> G_;
    std::vector<std::array<std::size_t, 2>> pairs_;
    std::vector<Triple> triples_;
};

struct SigmaReport {
    std::size_t paths = 0, violations = 0, skipped = 0;
    double max_ratio = 0;
    double min_uv = std::numeric_limits<double>::infinity();
    double max_identity_error = 0; // |Q(du + dv)/4 - (Q(du)+Q(dv))/4 - <du|dv>/2|
    double max_tau_gap = 0;        // dual formula vs shooting on sampled level points
    bool pass(double eps = 1e-6) const { return violations == 0 && min_uv >= -eps; }
};

inline SigmaReport sigma_map_check(const AchronalSet& s, std::size_t paths, std::uint64_t seed, int segments = 8,
                                   double eps = 1e-6, std::size_t shooting_checks = 5) {
    SigmaMap sm(s);
    const EnvelopePair& e = sm.envelopes();
    SigmaReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto rand_s = [&]() {
        // stay away from the boundary circle, where the level set runs off to infinity
        double rho = 1.2 * std::sqrt(U(rng)), phi = kTwoPi * U(rng);
        return conf_polar(rho, phi, 0).s;
    };
    for (std::size_t k = 0; k < paths; ++k) {
        S2 a = rand_s(), b = rand_s();
        std::vector<TPoint> curve;
        bool ok = true;
        for (int j = 0; j <= segments && ok; ++j) {
            double t = static_cast<double>(j) / segments;
            S2 q = normalized3({(1 - t) * a[0] + t * b[0], (1 - t) * a[1] + t * b[1], (1 - t) * a[2] + t * b[2]});
            auto lp = sm.level_point(q);
            if (!lp) {
                ok = false;
                break;
            }
            if (k < shooting_checks && j == 0) {
                auto ct = cosmological_time(e, *lp);
                rep.max_tau_gap = std::max(rep.max_tau_gap, std::abs(ct.tau_shooting - kPi / 4));
            }
            curve.push_back(sm.pair(conf_to_quadric(*lp)));
        }
        if (!ok) {
            ++rep.skipped;
            continue;
        }
        ++rep.paths;
        double LT = 0, LH = 0;
        for (std::size_t j = 1; j < curve.size(); ++j) {
            Vec22 dx = curve[j].x - curve[j - 1].x, dy = curve[j].y - curve[j - 1].y;
            double qt = 0.25 * (q_form(dx) + q_form(dy));
            double qh = q_form(0.5 * (dx + dy));
            rep.max_identity_error =
                std::max(rep.max_identity_error, std::abs(qh - qt - 0.5 * q_pair(dx, dy)));
            LT += std::sqrt(std::max(0.0, qt));
            LH += std::sqrt(std::max(0.0, qh));
        }
        rep.min_uv = std::min(rep.min_uv, curve_uv_min(curve));
        double ratio = LH > 0 ? LT / LH : 1.0;
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (ratio > 1 + eps) ++rep.violations;
    }
    return rep;
}

} // namespace adskit
