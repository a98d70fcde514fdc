#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace adskit {

// Dense two-phase simplex for   max c.x  s.t.  A x <= b,  x >= 0.
// Bland's rule on ties; sized for the handful of variables used here.
struct LpResult {
    enum Status { OPTIMAL, INFEASIBLE, UNBOUNDED } status = INFEASIBLE;
    double value = 0;
    std::vector<double> x;
};

class SimplexLp {
public:
    SimplexLp(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), N_(n_ + 1), B_(m_),
          D_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
        for (int i = 0; i < m_; ++i) {
            B_[i] = n_ + i;
            D_[i][n_] = -1;
            D_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            N_[j] = j;
            D_[m_][j] = -c[j];
        }
        N_[n_] = -1;
        D_[m_ + 1][n_] = 1;
    }

    LpResult solve() {
        LpResult res;
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
        if (m_ > 0 && D_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!simplex(1) || D_[m_ + 1][n_ + 1] < -kEps) {
                res.status = LpResult::INFEASIBLE;
                return res;
            }
            for (int i = 0; i < m_; ++i)
                if (B_[i] == -1) {
                    int s = -1;
                    for (int j = 0; j <= n_; ++j)
                        if (s == -1 || D_[i][j] < D_[i][s] || (D_[i][j] == D_[i][s] && N_[j] < N_[s])) s = j;
                    pivot(i, s);
                }
        }
        if (!simplex(2)) {
            res.status = LpResult::UNBOUNDED;
            return res;
        }
        res.status = LpResult::OPTIMAL;
        res.x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (B_[i] < n_) res.x[B_[i]] = D_[i][n_ + 1];
        res.value = D_[m_][n_ + 1];
        return res;
    }

private:
    static constexpr double kEps = 1e-12;
    int m_, n_;
    std::vector<int> N_, B_;
    std::vector<std::vector<double>> D_;

    void pivot(int r, int s) {
        double inv = 1.0 / D_[r][s];
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r)
                for (int j = 0; j < n_ + 2; ++j)
                    if (j != s) D_[i][j] -= D_[r][j] * D_[i][s] * inv;
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_[r][j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) D_[i][s] *= -inv;
        D_[r][s] = inv;
        std::swap(B_[r], N_[s]);
    }

    bool simplex(int phase) {
        int x = phase == 1 ? m_ + 1 : m_;
        for (int guard = 0; guard < 100000; ++guard) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (phase == 2 && N_[j] == -1) continue;
                if (s == -1 || D_[x][j] < D_[x][s] || (D_[x][j] == D_[x][s] && N_[j] < N_[s])) s = j;
            }
            if (D_[x][s] > -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][s] < kEps) continue;
                if (r == -1) {
                    r = i;
                    continue;
                }
                double lhs = D_[i][n_ + 1] / D_[i][s], rhs = D_[r][n_ + 1] / D_[r][s];
                if (lhs < rhs || (lhs == rhs && B_[i] < B_[r])) r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
        return true;
    }
};

// max c.x, A x <= b, x free (split as x = p - q).
inline LpResult solve_lp_free(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                              const std::vector<double>& c) {
    std::size_t n = c.size();
    std::vector<std::vector<double>> A2(A.size(), std::vector<double>(2 * n));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            A2[i][j] = A[i][j];
            A2[i][n + j] = -A[i][j];
        }
    std::vector<double> c2(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        c2[j] = c[j];
        c2[n + j] = -c[j];
    }
    LpResult r = SimplexLp(A2, b, c2).solve();
    if (r.status == LpResult::OPTIMAL) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = r.x[j] - r.x[n + j];
        r.x = x;
    }
    return r;
}

// Is q a convex combination of pts (each of dimension d)? Feasibility LP with tolerance.
inline bool lp_in_convex_hull(const std::vector<std::vector<double>>& pts, const std::vector<double>& q,
                              double tol) {
    std::size_t n = pts.size(), d = q.size();
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = pts[i][k];
            neg[i] = -pts[i][k];
        }
        A.push_back(row);
        b.push_back(q[k] + tol);
        A.push_back(neg);
        b.push_back(-q[k] + tol);
    }
    A.push_back(std::vector<double>(n, 1.0));
    b.push_back(1.0);
    A.push_back(std::vector<double>(n, -1.0));
    b.push_back(-1.0);
    LpResult r = SimplexLp(A, b, std::vector<double>(n, 0.0)).solve();
    return r.status == LpResult::OPTIMAL;
}

} // namespace adskit
