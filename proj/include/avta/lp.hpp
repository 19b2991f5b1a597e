#pragma once

#include <fstream>
#include <optional>
#include <vector>

#include "avta/avta.hpp"
#include "avta/core.hpp"
#include "avta/errors.hpp"
#include "avta/io.hpp"

namespace avta {

/// A nonnegative linear system {x >= 0 : A x = b}; columns of A are the
/// generators. c is an optional cost row for optimization queries.
struct LinearSystem {
    Matrix A;  // m x n
    Vector b;  // m
    std::optional<Vector> c;

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }
};

namespace detail {

inline std::vector<double> parse_csv_row(const std::string& line, const std::string& path) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            row.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw std::invalid_argument("read_linear_system: non-numeric field in " + path);
        }
    }
    return row;
}

} // namespace detail

/// File layout: m CSV rows for A (n fields each), one row for b (m fields),
/// then optionally one row for c (n fields). The rows are ragged on purpose.
inline LinearSystem read_linear_system(const std::string& path, bool expect_c = false) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(detail::parse_csv_row(line, path));
    }
    const std::size_t extra = expect_c ? 2 : 1;
    if (rows.size() < extra + 1)
        throw std::invalid_argument("read_linear_system: too few rows in " + path);
    const std::size_t m = rows.size() - extra;
    const std::size_t n = rows[0].size();
    LinearSystem sys;
    sys.A.resize(static_cast<Index>(m), static_cast<Index>(n));
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n)
            throw std::invalid_argument("read_linear_system: ragged matrix row in " + path);
        for (std::size_t j = 0; j < n; ++j)
            sys.A(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    if (rows[m].size() != m)
        throw std::invalid_argument("read_linear_system: b row has wrong length in " + path);
    sys.b.resize(static_cast<Index>(m));
    for (std::size_t i = 0; i < m; ++i) sys.b(static_cast<Index>(i)) = rows[m][i];
    if (expect_c) {
        if (rows[m + 1].size() != n)
            throw std::invalid_argument("read_linear_system: c row has wrong length in " + path);
        Vector c(static_cast<Index>(n));
        for (std::size_t j = 0; j < n; ++j) c(static_cast<Index>(j)) = rows[m + 1][j];
        sys.c = c;
    }
    return sys;
}

inline void write_linear_system(const std::string& path, const LinearSystem& sys) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.precision(17);
    for (Index i = 0; i < sys.A.rows(); ++i) {
        for (Index j = 0; j < sys.A.cols(); ++j) {
            if (j) f << ',';
            f << sys.A(i, j);
        }
        f << '\n';
    }
    for (Index i = 0; i < sys.b.size(); ++i) {
        if (i) f << ',';
        f << sys.b(i);
    }
    f << '\n';
    if (sys.c) {
        for (Index j = 0; j < sys.c->size(); ++j) {
            if (j) f << ',';
            f << (*sys.c)(j);
        }
        f << '\n';
    }
}

/// Collapses exactly-equal columns to their first occurrence.
inline std::vector<Index> dedup_column_indices(const Matrix& A) {
    std::vector<Index> keep;
    for (Index j = 0; j < A.cols(); ++j) {
        bool dup = false;
        for (Index k : keep)
            if (A.col(j) == A.col(k)) { dup = true; break; }
        if (!dup) keep.push_back(j);
    }
    return keep;
}

struct PruneResult {
    LinearSystem reduced;
    std::vector<Index> kept; // ascending original column indices
};

namespace detail {

inline Matrix select_columns(const Matrix& A, const std::vector<Index>& idx) {
    Matrix out(A.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = A.col(idx[k]);
    return out;
}

/// Vertex columns of a matrix's column set (columns viewed as points),
/// optionally after dedup, reported as ascending original indices.
inline std::vector<Index> vertex_columns(const Matrix& A, double gamma,
                                         std::uint64_t seed, bool dedup) {
    std::vector<Index> pool(static_cast<std::size_t>(A.cols()));
    for (Index j = 0; j < A.cols(); ++j) pool[static_cast<std::size_t>(j)] = j;
    if (dedup) pool = dedup_column_indices(A);
    const PointSet pts(select_columns(A, pool).transpose());
    const VertexReport rep = avta_gamma(pts, gamma, seed);
    std::vector<Index> kept;
    for (Index local : rep.sorted_vertices()) kept.push_back(pool[static_cast<std::size_t>(local)]);
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace detail

/// Keeps only the columns that are vertices of the column hull; feasibility
/// of {x >= 0 : A x = b} is preserved.
inline PruneResult prune_columns_feasibility(const LinearSystem& sys, double gamma,
                                             std::uint64_t seed = 0, bool dedup = false) {
    PruneResult out;
    out.kept = detail::vertex_columns(sys.A, gamma, seed, dedup);
    out.reduced.A = detail::select_columns(sys.A, out.kept);
    out.reduced.b = sys.b;
    if (sys.c) {
        Vector cr(static_cast<Index>(out.kept.size()));
        for (std::size_t k = 0; k < out.kept.size(); ++k) cr(static_cast<Index>(k)) = (*sys.c)(out.kept[k]);
        out.reduced.c = cr;
    }
    return out;
}

/// Optimization-preserving pruning: stacks the cost row on top of A and
/// prunes vertex columns of the stacked matrix, so min{c.x : Ax=b, x>=0}
/// is unchanged.
inline PruneResult prune_columns_optimization(const LinearSystem& sys, const Vector& c,
                                              double gamma, std::uint64_t seed = 0,
                                              bool dedup = false) {
    if (c.size() != sys.cols())
        throw std::invalid_argument("prune_columns_optimization: cost length mismatch");
    Matrix B(sys.A.rows() + 1, sys.A.cols());
    B.row(0) = c.transpose();
    B.bottomRows(sys.A.rows()) = sys.A;

    PruneResult out;
    out.kept = detail::vertex_columns(B, gamma, seed, dedup);
    out.reduced.A = detail::select_columns(sys.A, out.kept);
    out.reduced.b = sys.b;
    Vector cr(static_cast<Index>(out.kept.size()));
    for (std::size_t k = 0; k < out.kept.size(); ++k) cr(static_cast<Index>(k)) = c(out.kept[k]);
    out.reduced.c = cr;
    return out;
}

struct ConeResult {
    bool feasible = false;
    std::vector<Index> generator_columns; // ascending original indices
    ConvexCombination witness;            // separating certificate when infeasible
    Vector anchor;                        // the scaling anchor used
    double distance = 0.0;                // hull-space distance of scaled b
};

/// Is b in cone(columns of A)? Columns and b are scaled onto the hyperplane
/// <a,x> = beta, which turns the conic question into a hull-membership
/// question; the hull is first pruned to its generators.
inline ConeResult cone_feasibility(const LinearSystem& sys, double gamma,
                                   double epsilon, std::uint64_t seed = 0) {
    const Index m = sys.rows();
    const Index n = sys.cols();
    ConeResult out;

    if (sys.b.isZero(0.0)) { // x = 0 solves it
        out.feasible = true;
        return out;
    }

    const double beta = 1.0;
    Vector a = Vector::Ones(m);
    auto anchor_ok = [&](const Vector& cand) {
        for (Index j = 0; j < n; ++j)
            if (cand.dot(sys.A.col(j)) <= 0.0) return false;
        return true;
    };
    if (!anchor_ok(a)) {
        // fall back to the mean of the normalized column directions
        Vector s = Vector::Zero(m);
        for (Index j = 0; j < n; ++j) {
            const double norm = sys.A.col(j).norm();
            if (norm == 0.0)
                throw AnchorError("cone_feasibility: zero column cannot be scaled");
            s += sys.A.col(j) / norm;
        }
        a = s;
        if (!anchor_ok(a))
            throw AnchorError(
                "cone_feasibility: no scaling anchor found; supply columns with a "
                "common strictly-positive direction");
    }
    out.anchor = a;

    const double ab = a.dot(sys.b);
    if (ab <= 0.0) {
        // every nonnegative combination has a.Ax >= 0 with equality only at
        // x = 0, so a separates b from the cone
        out.feasible = false;
        return out;
    }

    Matrix scaled(n, m); // rows are the scaled column-points
    for (Index j = 0; j < n; ++j)
        scaled.row(j) = (sys.A.col(j) * (beta / a.dot(sys.A.col(j)))).transpose();
    const Vector b_hat = sys.b * (beta / ab);

    const PointSet pts(scaled);
    const VertexReport rep = avta_gamma(pts, gamma, seed);
    out.generator_columns = rep.sorted_vertices();

    SolveOptions opt;
    opt.R_override = rep.R;
    const MembershipResult res =
        solve_membership(pts, out.generator_columns, b_hat, epsilon, opt);
    out.feasible = res.kind == MembershipResult::Kind::ApproxSolution;
    out.witness = res.combination;
    out.distance = res.distance_to_query;
    return out;
}

} // namespace avta
