#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "avta/core.hpp"
#include "avta/errors.hpp"
#include "avta/triangle.hpp"

namespace avta {

enum class VertexMode { Gamma, KSearch, TApprox };

/// How a vertex entered the output set: either as the initial farthest seed,
/// or through a witness direction c' = v - p' whose argmax face S' it
/// dominates.
struct VertexCertificate {
    Index vertex = -1;
    bool farthest_init = false;
    Vector direction;                 // c', empty for the seed
    std::vector<Index> support_set;   // S' (argmax face), empty for the seed
    Index source_candidate = -1;      // the v whose witness produced it
};

struct VertexReport {
    std::vector<Index> vertex_indices;   // discovery order
    std::vector<VertexCertificate> certificates;
    VertexMode mode = VertexMode::Gamma;
    double gamma_used = 0.0;
    double t_used = 0.0;
    std::uint64_t seed = 0;
    double R = 0.0;
    bool R_approximate = false;
    long total_pivots = 0;
    long membership_calls = 0;
    long discarded_points = 0;

    std::vector<Index> sorted_vertices() const {
        std::vector<Index> v = vertex_indices;
        std::sort(v.begin(), v.end());
        return v;
    }
};

/// Index in `among` farthest from `from`; ties broken by smallest index.
inline Index farthest(const PointSet& ps, const Vector& from,
                      const std::vector<Index>& among) {
    if (among.empty()) throw std::invalid_argument("farthest: empty candidate list");
    Index best = among.front();
    double best_d2 = (ps.points().row(best).transpose() - from).squaredNorm();
    for (std::size_t k = 1; k < among.size(); ++k) {
        const Index i = among[k];
        const double d2 = (ps.points().row(i).transpose() - from).squaredNorm();
        if (d2 > best_d2 || (d2 == best_d2 && i < best)) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

namespace detail {

/// Draws a position in [0, size). Uses a plain modulo reduction so results
/// are identical across standard libraries (uniform_int_distribution is not).
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t size) {
    return static_cast<std::size_t>(rng() % size);
}

/// The vertex-growing loop shared by all modes. `threshold` is the epsilon
/// handed to the membership subproblem (gamma/2, t/2, or sigma/2 depending
/// on the caller); R is always the full-set diameter.
inline VertexReport grow_vertices(const PointSet& ps, double threshold,
                                  std::uint64_t seed,
                                  Index diameter_approx_threshold = 4000) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("grow_vertices: threshold must be in (0,1)");
    const Index n = ps.size();
    VertexReport rep;
    rep.seed = seed;

    if (n == 1) {
        rep.vertex_indices.push_back(0);
        VertexCertificate c;
        c.vertex = 0;
        c.farthest_init = true;
        rep.certificates.push_back(std::move(c));
        return rep;
    }

    const DiameterResult dia = diameter_with_mode(ps, diameter_approx_threshold);
    rep.R = dia.value;
    rep.R_approximate = dia.approximate;
    if (rep.R == 0.0) { // all points identical: one vertex, everything else a copy
        rep.vertex_indices.push_back(0);
        VertexCertificate c;
        c.vertex = 0;
        c.farthest_init = true;
        rep.certificates.push_back(std::move(c));
        rep.discarded_points = n - 1;
        return rep;
    }

    std::mt19937_64 rng(seed);
    std::vector<char> in_hat(static_cast<std::size_t>(n), 0);
    std::vector<Index> hat;

    auto add_vertex = [&](Index v, VertexCertificate cert) {
        hat.push_back(v);
        in_hat[static_cast<std::size_t>(v)] = 1;
        rep.vertex_indices.push_back(v);
        rep.certificates.push_back(std::move(cert));
    };

    // Step 0: seed with the point farthest from v0.
    {
        std::vector<Index> all(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        const Index v0_far = farthest(ps, ps.point(0), all);
        VertexCertificate c;
        c.vertex = v0_far;
        c.farthest_init = true;
        add_vertex(v0_far, std::move(c));
    }

    // Active pool: not yet in the hull set and not yet discarded.
    std::vector<Index> active;
    active.reserve(static_cast<std::size_t>(n) - 1);
    for (Index i = 0; i < n; ++i)
        if (!in_hat[static_cast<std::size_t>(i)]) active.push_back(i);

    auto pool_remove = [&](Index v) {
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (active[k] == v) {
                active[k] = active.back();
                active.pop_back();
                return;
            }
        }
    };

    while (!active.empty()) {
        // Step 1: random candidate.
        const std::size_t pos = draw_index(rng, active.size());
        Index v = active[pos];
        ConvexCombination warm;
        bool have_warm = false;

        while (true) {
            // Step 2: membership of v in conv(hat) at the mode threshold,
            // measured against the global diameter.
            SolveOptions opt;
            opt.R_override = rep.R;
            if (have_warm) opt.start = &warm;
            MembershipResult res =
                solve_membership(ps, hat, ps.point(v), threshold, opt);
            ++rep.membership_calls;
            rep.total_pivots += res.iterations;

            if (res.kind == MembershipResult::Kind::ApproxSolution) {
                // Step 3: v is (approximately) inside; never revisited.
                pool_remove(v);
                ++rep.discarded_points;
                break;
            }

            // Step 4: witness direction and its argmax face over S \ hat.
            const Vector p_prime = res.combination.materialize(ps);
            const Vector c_prime = ps.point(v) - p_prime;
            double cmax = -std::numeric_limits<double>::infinity();
            for (Index i = 0; i < n; ++i) {
                if (in_hat[static_cast<std::size_t>(i)]) continue;
                cmax = std::max(cmax, c_prime.dot(ps.point(i)));
            }
            std::vector<Index> face;
            for (Index i = 0; i < n; ++i) {
                if (in_hat[static_cast<std::size_t>(i)]) continue;
                if (c_prime.dot(ps.point(i)) >= cmax - 1e-9) face.push_back(i);
            }
            const Index v_rand = face[draw_index(rng, face.size())];
            const Index v_new = farthest(ps, ps.point(v_rand), face);

            VertexCertificate cert;
            cert.vertex = v_new;
            cert.direction = c_prime;
            cert.support_set = face;
            cert.source_candidate = v;
            pool_remove(v_new);
            add_vertex(v_new, std::move(cert));

            // Step 5: if the new vertex was the candidate itself, pick a
            // fresh candidate; otherwise re-test v against the grown set,
            // warm-starting from the witness combination (still supported
            // on the working set, which only grew).
            if (v_new == v) break;
            warm = res.combination;
            have_warm = true;
        }
    }
    return rep;
}

} // namespace detail

/// Vertex enumeration at robustness level gamma: finds every vertex when
/// gamma lower-bounds Gamma*/R, and never reports a non-vertex regardless.
inline VertexReport avta_gamma(const PointSet& ps, double gamma,
                               std::uint64_t seed = 0) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("avta_gamma: gamma must be in (0,1)");
    VertexReport rep = detail::grow_vertices(ps, gamma / 2.0, seed);
    rep.mode = VertexMode::Gamma;
    rep.gamma_used = gamma;
    return rep;
}

/// K-driven search: halve gamma from 0.5 until at least K vertices appear.
/// Fails at the 2^-40 floor, which signals an overestimated K or degenerate
/// data rather than a recoverable condition.
inline VertexReport avta_k(const PointSet& ps, int K, std::uint64_t seed = 0) {
    if (K < 1) throw std::invalid_argument("avta_k: K must be positive");
    constexpr double kGammaFloor = 9.094947017729282e-13; // 2^-40
    double gamma = 0.5;
    long pivots = 0, calls = 0;
    while (true) {
        VertexReport rep = avta_gamma(ps, gamma, seed);
        pivots += rep.total_pivots;
        calls += rep.membership_calls;
        if (static_cast<int>(rep.vertex_indices.size()) >= K) {
            rep.mode = VertexMode::KSearch;
            rep.total_pivots = pivots;
            rep.membership_calls = calls;
            return rep;
        }
        if (gamma <= kGammaFloor)
            throw GammaFloorError("avta_k: gamma floor reached with " +
                                  std::to_string(rep.vertex_indices.size()) +
                                  " vertices, wanted " + std::to_string(K));
        gamma /= 2.0;
    }
}

/// t-approximation: a subset whose hull covers every input point within t*R.
inline VertexReport avta_t(const PointSet& ps, double t, std::uint64_t seed = 0) {
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("avta_t: t must be in (0,1)");
    VertexReport rep = detail::grow_vertices(ps, t / 2.0, seed);
    rep.mode = VertexMode::TApprox;
    rep.t_used = t;
    return rep;
}

/// Membership answered through the vertex subset: enumerate vertices first,
/// then query against them only. Kind agrees with the full-set query.
inline MembershipResult membership_via_vertices(const PointSet& ps, const Vector& p,
                                                double gamma, double epsilon,
                                                std::uint64_t seed = 0) {
    const VertexReport rep = avta_gamma(ps, gamma, seed);
    SolveOptions opt;
    opt.R_override = rep.R;
    return solve_membership(ps, rep.vertex_indices, p, epsilon, opt);
}

} // namespace avta
