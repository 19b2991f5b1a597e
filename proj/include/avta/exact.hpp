#pragma once

// Exact-rational verification oracle: a Bland's-rule two-phase simplex and a
// min-norm-point routine, both over cpp_rational. Desk-scale only (matrices
// with ~10 rows and a few hundred columns); everything terminates finitely
// because the arithmetic is exact. Primarily a test fixture, but the data
// generator also uses the vertex test for its convex-position check, which is
// why it lives in the include tree.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "avta/core.hpp"

namespace avta {
namespace exact {

using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline Rat from_double(double d) { return Rat(d); } // dyadic, exact

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value = 0;
    RatVec x; // primal solution when Optimal
};

namespace detail {

/// Bland's-rule simplex on a tableau in canonical form. `basis[r]` is the
/// column basic in row r; the objective row (reduced costs, negated value)
/// is tableau[m]. Returns false on unboundedness.
inline bool simplex_iterate(RatMat& T, std::vector<int>& basis, int m, int n) {
    while (true) {
        int enter = -1;
        for (int j = 0; j < n; ++j) {
            if (T[m][j] < 0) { enter = j; break; } // Bland: smallest index
        }
        if (enter < 0) return true;
        int leave = -1;
        Rat best_ratio = 0;
        for (int r = 0; r < m; ++r) {
            if (T[r][enter] > 0) {
                Rat ratio = T[r][n] / T[r][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return false; // unbounded
        // pivot on (leave, enter)
        const Rat piv = T[leave][enter];
        for (int j = 0; j <= n; ++j) T[leave][j] /= piv;
        for (int r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const Rat f = T[r][enter];
            if (f == 0) continue;
            for (int j = 0; j <= n; ++j) T[r][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
}

} // namespace detail

/// Solves min c.x subject to A x = b, x >= 0 exactly (two-phase, Bland).
inline LpResult lp_solve(const RatMat& A, const RatVec& b, const RatVec& c) {
    const int m = static_cast<int>(A.size());
    const int n = m > 0 ? static_cast<int>(A[0].size()) : static_cast<int>(c.size());
    if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != n)
        throw std::invalid_argument("lp_solve: shape mismatch");

    // Phase 1 tableau: columns [x | artificials], rows flipped so b >= 0.
    const int n1 = n + m;
    RatMat T(m + 1, RatVec(n1 + 1, Rat(0)));
    for (int r = 0; r < m; ++r) {
        const bool flip = b[r] < 0;
        for (int j = 0; j < n; ++j) T[r][j] = flip ? -A[r][j] : A[r][j];
        T[r][n + r] = 1;
        T[r][n1] = flip ? -b[r] : b[r];
    }
    // Phase-1 objective: sum of artificials, expressed in nonbasic terms.
    for (int j = 0; j <= n1; ++j) {
        Rat s = 0;
        for (int r = 0; r < m; ++r) s += T[r][j];
        if (j < n || j == n1) T[m][j] = -s;
        else T[m][j] = 0;
    }
    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = n + r;
    if (!detail::simplex_iterate(T, basis, m, n1))
        throw std::logic_error("lp_solve: phase 1 unbounded (impossible)");
    if (T[m][n1] != 0) { // phase-1 optimum = -sum(artificials)
        LpResult r;
        r.status = LpStatus::Infeasible;
        return r;
    }
    // Drive artificials out of the basis where possible; redundant rows keep a
    // zero-valued artificial, which is harmless if its column is frozen.
    for (int r = 0; r < m; ++r) {
        if (basis[r] >= n) {
            int enter = -1;
            for (int j = 0; j < n; ++j)
                if (T[r][j] != 0) { enter = j; break; }
            if (enter >= 0) {
                const Rat piv = T[r][enter];
                for (int j = 0; j <= n1; ++j) T[r][j] /= piv;
                for (int rr = 0; rr <= m; ++rr) {
                    if (rr == r) continue;
                    const Rat f = T[rr][enter];
                    if (f == 0) continue;
                    for (int j = 0; j <= n1; ++j) T[rr][j] -= f * T[r][j];
                }
                basis[r] = enter;
            }
        }
    }

    // Phase 2: rebuild the objective row for c over x-columns only; freeze
    // artificial columns by making them unattractive (they are excluded from
    // the iterate's column range below).
    for (int j = 0; j <= n; ++j) T[m][j] = (j < n) ? c[j] : Rat(0);
    T[m][n1] = 0;
    // express objective in nonbasic terms
    for (int r = 0; r < m; ++r) {
        if (basis[r] < n) {
            const Rat f = T[m][basis[r]];
            if (f == 0) continue;
            for (int j = 0; j <= n1; ++j) T[m][j] -= f * T[r][j];
        }
    }
    // Restrict pivoting to the first n columns: copy into a narrower view.
    // (simplex_iterate scans columns [0,n) for entering; rhs sits at index n1.
    //  We move the rhs next to the x-block.)
    RatMat T2(m + 1, RatVec(n + 1, Rat(0)));
    for (int r = 0; r <= m; ++r) {
        for (int j = 0; j < n; ++j) T2[r][j] = T[r][j];
        T2[r][n] = T[r][n1];
    }
    // Rows whose basic variable is a leftover artificial are redundant
    // (all-zero over x); they never block and never pivot.
    if (!detail::simplex_iterate(T2, basis, m, n)) {
        LpResult r;
        r.status = LpStatus::Unbounded;
        return r;
    }
    LpResult res;
    res.status = LpStatus::Optimal;
    res.value = -T2[m][n];
    res.x.assign(n, Rat(0));
    for (int r = 0; r < m; ++r)
        if (basis[r] < n) res.x[basis[r]] = T2[r][n];
    return res;
}

/// Feasibility of {x >= 0 : A x = b} via a zero objective.
inline bool lp_feasible(const RatMat& A, const RatVec& b) {
    RatVec c(A.empty() ? 0 : A[0].size(), Rat(0));
    return lp_solve(A, b, c).status == LpStatus::Optimal;
}

inline RatMat rat_rows_from(const PointSet& ps, const std::vector<Index>& idx) {
    RatMat out(idx.size(), RatVec(static_cast<std::size_t>(ps.dim())));
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (Index j = 0; j < ps.dim(); ++j)
            out[k][static_cast<std::size_t>(j)] = from_double(ps.points()(idx[k], j));
    return out;
}

/// Exact membership: p in conv({v_i : i in idx})?
inline bool in_hull_exact(const PointSet& ps, const std::vector<Index>& idx, const Vector& p) {
    if (idx.empty()) return false;
    const int m = static_cast<int>(ps.dim());
    const int k = static_cast<int>(idx.size());
    RatMat A(m + 1, RatVec(k));
    RatVec b(m + 1);
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < k; ++j) A[r][j] = from_double(ps.points()(idx[j], r));
        b[r] = from_double(p(r));
    }
    for (int j = 0; j < k; ++j) A[m][j] = 1;
    b[m] = 1;
    return lp_feasible(A, b);
}

/// Exact vertex test: v_i is a vertex of conv(S) iff it is outside the hull
/// of the remaining points.
inline bool is_vertex_exact(const PointSet& ps, Index i) {
    std::vector<Index> others;
    others.reserve(ps.size() - 1);
    for (Index j = 0; j < ps.size(); ++j)
        if (j != i) others.push_back(j);
    if (others.empty()) return true;
    return !in_hull_exact(ps, others, ps.point(i));
}

inline std::vector<Index> vertex_set_exact(const PointSet& ps) {
    std::vector<Index> out;
    for (Index i = 0; i < ps.size(); ++i)
        if (is_vertex_exact(ps, i)) out.push_back(i);
    return out;
}

namespace detail {

/// Solves a square rational linear system by Gaussian elimination with
/// partial (first-nonzero) pivoting. Throws on singularity.
inline RatVec solve_linear(RatMat A, RatVec b) {
    const int n = static_cast<int>(A.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (A[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw std::logic_error("solve_linear: singular system");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            const Rat f = A[r][col] / A[col][col];
            for (int j = col; j < n; ++j) A[r][j] -= f * A[col][j];
            b[r] -= f * b[col];
        }
    }
    RatVec x(n);
    for (int r = 0; r < n; ++r) x[r] = b[r] / A[r][r];
    return x;
}

} // namespace detail

/// Exact squared distance from p to conv({v_i : i in idx}) via the min-norm
/// point method (corral maintenance). Finite termination in exact arithmetic.
inline Rat dist2_to_hull_exact(const PointSet& ps, const std::vector<Index>& idx,
                               const Vector& p) {
    if (idx.empty()) throw std::invalid_argument("dist2_to_hull_exact: empty set");
    const int m = static_cast<int>(ps.dim());
    const int k = static_cast<int>(idx.size());
    // Shift: q_j = v_j - p; answer is min-norm point of conv(q).
    RatMat Q(k, RatVec(m));
    for (int j = 0; j < k; ++j)
        for (int r = 0; r < m; ++r)
            Q[j][r] = from_double(ps.points()(idx[j], r)) - from_double(p(r));
    auto dot = [&](const RatVec& a, const RatVec& b_) {
        Rat s = 0;
        for (int r = 0; r < m; ++r) s += a[r] * b_[r];
        return s;
    };
    // start at the smallest-norm q
    int best = 0;
    Rat best_n2 = dot(Q[0], Q[0]);
    for (int j = 1; j < k; ++j) {
        const Rat n2 = dot(Q[j], Q[j]);
        if (n2 < best_n2) { best_n2 = n2; best = j; }
    }
    std::vector<int> corral{best};
    RatVec lambda{Rat(1)};
    RatVec x = Q[best];

    const int max_major = 4 * (k + m + 4) * (k + m + 4); // generous finite guard
    for (int major = 0; major < max_major; ++major) {
        const Rat xx = dot(x, x);
        if (xx == 0) return Rat(0);
        // most-violating point
        int jmin = -1;
        Rat vmin = 0;
        for (int j = 0; j < k; ++j) {
            const Rat v = dot(x, Q[j]);
            if (jmin < 0 || v < vmin) { vmin = v; jmin = j; }
        }
        if (vmin >= xx) return xx; // optimality: x.q_j >= x.x for all j
        if (std::find(corral.begin(), corral.end(), jmin) == corral.end()) {
            corral.push_back(jmin);
            lambda.push_back(Rat(0));
        }
        // minor loop: affine min-norm over the corral, contract if needed
        while (true) {
            const int s = static_cast<int>(corral.size());
            // Solve: [1 1..1; 1 G] [beta; mu] = [1; 0] where G = Gram(corral).
            RatMat M(s + 1, RatVec(s + 1, Rat(0)));
            RatVec rhs(s + 1, Rat(0));
            rhs[0] = 1;
            for (int a = 0; a < s; ++a) {
                M[0][a + 1] = 1;
                M[a + 1][0] = 1;
                for (int b_ = 0; b_ < s; ++b_)
                    M[a + 1][b_ + 1] = dot(Q[corral[a]], Q[corral[b_]]);
            }
            RatVec sol = detail::solve_linear(M, rhs);
            RatVec mu(sol.begin() + 1, sol.end());
            bool all_pos = true;
            for (const Rat& w : mu)
                if (w <= 0) { all_pos = false; break; }
            if (all_pos) {
                lambda = mu;
                x.assign(m, Rat(0));
                for (int a = 0; a < s; ++a)
                    for (int r = 0; r < m; ++r) x[r] += mu[a] * Q[corral[a]][r];
                break;
            }
            // step toward mu until the first weight hits zero
            Rat theta = 1;
            for (int a = 0; a < s; ++a) {
                if (mu[a] <= 0) {
                    const Rat t = lambda[a] / (lambda[a] - mu[a]);
                    if (t < theta) theta = t;
                }
            }
            for (int a = 0; a < s; ++a)
                lambda[a] = lambda[a] + theta * (mu[a] - lambda[a]);
            // drop zero-weight members
            std::vector<int> nc;
            RatVec nl;
            for (int a = 0; a < s; ++a) {
                if (lambda[a] > 0) {
                    nc.push_back(corral[a]);
                    nl.push_back(lambda[a]);
                }
            }
            corral = std::move(nc);
            lambda = std::move(nl);
            if (corral.size() == 1) {
                x = Q[corral[0]];
                lambda[0] = 1;
                break;
            }
        }
    }
    throw std::logic_error("dist2_to_hull_exact: failed to terminate");
}

/// Gamma*: min over vertices v of d(v, conv(other vertices)). Returns 0 for
/// degenerate inputs with < 2 vertices.
inline double gamma_star_distance(const PointSet& ps,
                                  const std::vector<Index>& vertices) {
    if (vertices.size() < 2) return 0.0;
    Rat best2 = -1;
    for (std::size_t a = 0; a < vertices.size(); ++a) {
        std::vector<Index> others;
        for (std::size_t b = 0; b < vertices.size(); ++b)
            if (b != a) others.push_back(vertices[b]);
        const Rat d2 = dist2_to_hull_exact(ps, others, ps.point(vertices[a]));
        if (best2 < 0 || d2 < best2) best2 = d2;
    }
    return std::sqrt(static_cast<double>(best2));
}

/// Sigma*: min over vertices v of d(v, conv(all points except v)).
inline double sigma_star_distance(const PointSet& ps,
                                  const std::vector<Index>& vertices) {
    if (ps.size() < 2) return 0.0;
    Rat best2 = -1;
    for (Index v : vertices) {
        std::vector<Index> others;
        for (Index j = 0; j < ps.size(); ++j)
            if (j != v) others.push_back(j);
        const Rat d2 = dist2_to_hull_exact(ps, others, ps.point(v));
        if (best2 < 0 || d2 < best2) best2 = d2;
    }
    return std::sqrt(static_cast<double>(best2));
}

/// Exact distance from a free point to a hull (double output for tests).
inline double dist_to_hull(const PointSet& ps, const std::vector<Index>& idx,
                           const Vector& p) {
    return std::sqrt(static_cast<double>(dist2_to_hull_exact(ps, idx, p)));
}

/// LP oracle over double data: min c.x s.t. A x = b, x >= 0.
struct LpVerdict {
    LpStatus status;
    double value; // meaningful only when Optimal
};

inline LpVerdict lp_solve_double(const Matrix& A, const Vector& b, const Vector& c) {
    RatMat Ar(static_cast<std::size_t>(A.rows()), RatVec(static_cast<std::size_t>(A.cols())));
    for (Index r = 0; r < A.rows(); ++r)
        for (Index j = 0; j < A.cols(); ++j)
            Ar[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = from_double(A(r, j));
    RatVec br(static_cast<std::size_t>(b.size()));
    for (Index r = 0; r < b.size(); ++r) br[static_cast<std::size_t>(r)] = from_double(b(r));
    RatVec cr(static_cast<std::size_t>(c.size()));
    for (Index j = 0; j < c.size(); ++j) cr[static_cast<std::size_t>(j)] = from_double(c(j));
    const LpResult r = lp_solve(Ar, br, cr);
    return {r.status, r.status == LpStatus::Optimal ? static_cast<double>(r.value) : 0.0};
}

inline bool lp_feasible_double(const Matrix& A, const Vector& b) {
    Vector c = Vector::Zero(A.cols());
    return lp_solve_double(A, b, c).status == LpStatus::Optimal;
}

} // namespace exact
} // namespace avta
