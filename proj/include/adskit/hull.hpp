#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "quadspace.hpp"

namespace adskit {

using Vec3 = Eigen::Vector3d;

// Convex hull of a finite point set in R^3, degrading to polygon / segment / point.
struct Hull3 {
    struct Facet {
        std::vector<int> verts; // ordered boundary cycle
        Vec3 normal;            // unit outward
        double offset = 0;      // normal.y <= offset inside
    };

    int dim = -1;
    std::vector<Vec3> pts;
    std::vector<int> vertices;
    std::vector<Facet> facets;
    // affine frame of the span for dim < 3
    Vec3 origin = Vec3::Zero();
    std::vector<Vec3> basis;
    // 2D polygon (dim 2) as planar half-planes: n.(y2) <= off
    std::vector<std::pair<Eigen::Vector2d, double>> edges2;
    double tmin = 0, tmax = 0;

    bool is_vertex(int i) const { return std::binary_search(vertices.begin(), vertices.end(), i); }

    double span_distance(const Vec3& y) const {
        Vec3 r = y - origin;
        for (const auto& b : basis) r -= r.dot(b) * b;
        return r.norm();
    }

    bool contains(const Vec3& y, double eps) const {
        if (dim == 3) {
            for (const auto& f : facets)
                if (f.normal.dot(y) > f.offset + eps) return false;
            return true;
        }
        if (span_distance(y) > eps) return false;
        if (dim == 0) return true;
        if (dim == 1) {
            double t = (y - origin).dot(basis[0]);
            return t >= tmin - eps && t <= tmax + eps;
        }
        Eigen::Vector2d z((y - origin).dot(basis[0]), (y - origin).dot(basis[1]));
        for (const auto& [n, off] : edges2)
            if (n.dot(z) > off + eps) return false;
        return true;
    }
};

namespace detail {

struct Tri {
    std::array<int, 3> v;
    Vec3 n;
    double off;
    bool alive = true;
};

inline Tri make_tri(const std::vector<Vec3>& P, int a, int b, int c, const Vec3& inside) {
    Tri t{{a, b, c}, Vec3::Zero(), 0};
    Vec3 n = (P[b] - P[a]).cross(P[c] - P[a]);
    double len = n.norm();
    if (len > 0) n /= len;
    if (n.dot(inside - P[a]) > 0) {
        std::swap(t.v[1], t.v[2]);
        n = -n;
    }
    t.n = n;
    t.off = n.dot(P[a]);
    return t;
}

inline std::vector<int> monotone_chain(const std::vector<Eigen::Vector2d>& Z, const std::vector<int>& idx,
                                       double eps) {
    std::vector<int> order = idx;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return Z[i].x() < Z[j].x() || (Z[i].x() == Z[j].x() && Z[i].y() < Z[j].y());
    });
    auto cross = [&](int o, int a, int b) {
        return (Z[a] - Z[o]).x() * (Z[b] - Z[o]).y() - (Z[a] - Z[o]).y() * (Z[b] - Z[o]).x();
    };
    std::vector<int> H(2 * order.size() + 1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        while (k >= 2 && cross(H[k - 2], H[k - 1], order[i]) <= eps) --k;
        H[k++] = order[i];
    }
    for (std::size_t i = order.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(H[k - 2], H[k - 1], order[i]) <= eps) --k;
        H[k++] = order[i];
    }
    H.resize(k > 1 ? k - 1 : k);
    return H;
}

} // namespace detail

inline Hull3 convex_hull_3d(const std::vector<Vec3>& P, double eps) {
    Hull3 h;
    h.pts = P;
    const int n = static_cast<int>(P.size());
    if (n == 0) return h;

    Vec3 mean = Vec3::Zero();
    for (const auto& p : P) mean += p;
    mean /= n;
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    for (const auto& p : P) C += (p - mean) * (p - mean).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
    Eigen::Vector3d ev = es.eigenvalues(); // ascending
    Eigen::Matrix3d V = es.eigenvectors();
    // spread along each principal axis
    std::array<double, 3> spread{};
    for (int k = 0; k < 3; ++k) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : P) {
            double t = (p - mean).dot(V.col(k));
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        spread[k] = hi - lo;
    }
    (void)ev;
    int dim = 0;
    for (int k = 0; k < 3; ++k)
        if (spread[k] > eps) ++dim;
    h.origin = mean;

    if (dim == 0) {
        h.dim = 0;
        h.vertices = {0};
        return h;
    }
    if (dim == 1) {
        h.dim = 1;
        Vec3 b = V.col(2);
        h.basis = {b};
        int imin = 0, imax = 0;
        for (int i = 0; i < n; ++i) {
            double t = (P[i] - mean).dot(b);
            if (t < (P[imin] - mean).dot(b)) imin = i;
            if (t > (P[imax] - mean).dot(b)) imax = i;
        }
        h.tmin = (P[imin] - mean).dot(b);
        h.tmax = (P[imax] - mean).dot(b);
        h.vertices = {std::min(imin, imax), std::max(imin, imax)};
        return h;
    }
    if (dim == 2) {
        h.dim = 2;
        Vec3 b0 = V.col(2), b1 = V.col(1);
        h.basis = {b0, b1};
        std::vector<Eigen::Vector2d> Z(n);
        for (int i = 0; i < n; ++i) Z[i] = {(P[i] - mean).dot(b0), (P[i] - mean).dot(b1)};
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<int> poly = detail::monotone_chain(Z, idx, eps * eps);
        Hull3::Facet f;
        f.verts = poly;
        f.normal = V.col(0);
        f.offset = f.normal.dot(mean);
        h.facets.push_back(f);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            Eigen::Vector2d a = Z[poly[k]], b = Z[poly[(k + 1) % poly.size()]];
            Eigen::Vector2d e = b - a;
            Eigen::Vector2d nn(e.y(), -e.x()); // outward for ccw polygon
            nn.normalize();
            h.edges2.push_back({nn, nn.dot(a)});
        }
        h.vertices = poly;
        std::sort(h.vertices.begin(), h.vertices.end());
        return h;
    }

    h.dim = 3;
    // initial tetrahedron
    int i0 = 0, i1 = 0;
    for (int i = 0; i < n; ++i) {
        if (P[i].x() < P[i0].x()) i0 = i;
        if (P[i].x() > P[i1].x()) i1 = i;
    }
    if (i0 == i1) {
        for (int i = 0; i < n; ++i)
            if ((P[i] - P[i0]).norm() > (P[i1] - P[i0]).norm()) i1 = i;
    }
    int i2 = -1;
    double best = -1;
    Vec3 dir = (P[i1] - P[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        Vec3 r = P[i] - P[i0];
        double d = (r - r.dot(dir) * dir).norm();
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    Vec3 pn = (P[i1] - P[i0]).cross(P[i2] - P[i0]).normalized();
    int i3 = -1;
    best = -1;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(pn.dot(P[i] - P[i0]));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    Vec3 inside = (P[i0] + P[i1] + P[i2] + P[i3]) / 4.0;
    std::vector<detail::Tri> T;
    T.push_back(detail::make_tri(P, i0, i1, i2, inside));
    T.push_back(detail::make_tri(P, i0, i1, i3, inside));
    T.push_back(detail::make_tri(P, i0, i2, i3, inside));
    T.push_back(detail::make_tri(P, i1, i2, i3, inside));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return (P[a] - inside).norm() > (P[b] - inside).norm(); });
    for (int i : order) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        std::vector<int> vis;
        for (int t = 0; t < static_cast<int>(T.size()); ++t)
            if (T[t].alive && T[t].n.dot(P[i]) - T[t].off > eps) vis.push_back(t);
        if (vis.empty()) continue;
        std::set<std::pair<int, int>> edges;
        for (int t : vis)
            for (int k = 0; k < 3; ++k) edges.insert({T[t].v[k], T[t].v[(k + 1) % 3]});
        for (int t : vis) T[t].alive = false;
        for (const auto& [a, b] : edges) {
            if (edges.count({b, a})) continue;
            detail::Tri nt{{a, b, i}, Vec3::Zero(), 0};
            Vec3 nn = (P[b] - P[a]).cross(P[i] - P[a]);
            double len = nn.norm();
            nn = len > 0 ? Vec3(nn / len) : Vec3::Zero();
            nt.n = nn;
            nt.off = nn.dot(P[a]);
            T.push_back(nt);
        }
    }
    std::vector<detail::Tri> live;
    for (const auto& t : T)
        if (t.alive) live.push_back(t);

    // merge coplanar triangles into facets
    std::vector<int> group(live.size(), -1);
    std::vector<std::vector<int>> groups;
    for (std::size_t a = 0; a < live.size(); ++a) {
        if (group[a] >= 0) continue;
        group[a] = static_cast<int>(groups.size());
        groups.push_back({static_cast<int>(a)});
        for (std::size_t b = a + 1; b < live.size(); ++b) {
            if (group[b] >= 0) continue;
            if ((live[a].n - live[b].n).norm() < 1e-9 && std::abs(live[a].off - live[b].off) < eps) {
                group[b] = group[a];
                groups.back().push_back(static_cast<int>(b));
            }
        }
    }
    std::set<int> vset;
    for (const auto& g : groups) {
        Hull3::Facet f;
        const auto& t0 = live[g.front()];
        f.normal = t0.n;
        f.offset = t0.off;
        std::set<int> vs;
        for (int t : g)
            for (int k : live[t].v) vs.insert(k);
        // order the boundary cycle by angle around the centroid
        Vec3 cen = Vec3::Zero();
        for (int k : vs) cen += P[k];
        cen /= static_cast<double>(vs.size());
        Vec3 e0 = (P[*vs.begin()] - cen);
        if (e0.norm() == 0) e0 = f.normal.unitOrthogonal();
        e0.normalize();
        Vec3 e1 = f.normal.cross(e0);
        std::vector<std::pair<double, int>> ang;
        for (int k : vs) ang.push_back({std::atan2((P[k] - cen).dot(e1), (P[k] - cen).dot(e0)), k});
        std::sort(ang.begin(), ang.end());
        // drop points that sit on an edge of the merged polygon
        std::vector<Eigen::Vector2d> Z(n);
        std::vector<int> ids;
        for (auto& [a, k] : ang) {
            Z[k] = {(P[k] - cen).dot(e0), (P[k] - cen).dot(e1)};
            ids.push_back(k);
        }
        std::vector<int> poly = detail::monotone_chain(Z, ids, eps * eps);
        f.verts = poly;
        for (int k : poly) vset.insert(k);
        h.facets.push_back(f);
    }
    h.vertices.assign(vset.begin(), vset.end());
    return h;
}

// Patch-affine hull of rays lying in V(center) = {q : <q|center> < 0}.
struct PatchHull {
    Vec22 center;
    std::array<Vec22, 3> frame; // Q-orthonormal frame of center-perp
    Hull3 hull;
    double eps = 1e-9;

    bool in_patch(const Vec22& q) const { return q_pair(q, center) < 0; }

    Vec3 to_patch(const Vec22& q) const {
        double s = -q_pair(q, center);
        if (!(s > 0)) throw Error(ErrorCode::PointOutsidePatch, "ray not in the affine patch");
        Vec22 y = q / s;
        return {q_pair(y, frame[0]) * q_form(frame[0]), q_pair(y, frame[1]) * q_form(frame[1]),
                q_pair(y, frame[2]) * q_form(frame[2])};
    }

    Vec22 from_patch(const Vec3& y) const {
        return center + y[0] * frame[0] + y[1] * frame[1] + y[2] * frame[2];
    }

    bool contains(const Vec22& q) const {
        if (!in_patch(q)) return false;
        return hull.contains(to_patch(q), eps);
    }

    // supporting hyperplane of a facet: l with <q|l> = s (normal.y - offset), so the hull sits in <.|l> <= 0
    Vec22 facet_dual(const Hull3::Facet& f) const {
        Vec22 l = f.offset * center;
        for (int k = 0; k < 3; ++k) l += (f.normal[k] * q_form(frame[k])) * frame[k];
        return l;
    }
};

inline std::array<Vec22, 3> q_orthonormal_complement(const Vec22& c) {
    std::vector<Vec22> basis = {c};
    std::array<Vec22, 4> cand = {Vec22{1, 0, 0, 0}, Vec22{0, 1, 0, 0}, Vec22{0, 0, 1, 0}, Vec22{0, 0, 0, 1}};
    std::array<Vec22, 3> out{};
    int k = 0;
    for (const auto& e : cand) {
        if (k == 3) break;
        Vec22 w = e;
        for (const auto& b : basis) w -= (q_pair(w, b) / q_form(b)) * b;
        double q = q_form(w);
        if (std::abs(q) < 1e-8) continue;
        w = w / std::sqrt(std::abs(q));
        basis.push_back(w);
        out[k++] = w;
    }
    if (k < 3) throw Error(ErrorCode::InvalidInput, "patch center is degenerate");
    return out;
}

inline PatchHull convex_hull_patch(const std::vector<SPoint>& points, const SPoint& patch_center,
                                   double eps_hull = default_tolerances().eps_hull) {
    PatchHull ph;
    ph.center = patch_center.rep;
    double qc = q_form(ph.center);
    if (!(qc < -1e-12)) throw Error(ErrorCode::InvalidInput, "patch center must be timelike");
    ph.center = ph.center / std::sqrt(-qc);
    ph.frame = q_orthonormal_complement(ph.center);
    ph.eps = eps_hull;
    std::vector<Vec3> P;
    P.reserve(points.size());
    for (const auto& p : points) {
        if (!ph.in_patch(p.rep)) throw Error(ErrorCode::PointOutsidePatch, "hull input outside the patch");
        P.push_back(ph.to_patch(p.rep));
    }
    ph.hull = convex_hull_3d(P, eps_hull);
    return ph;
}

} // namespace adskit
