#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "avta/avta.hpp"
#include "avta/core.hpp"
#include "avta/project.hpp"
#include "avta/triangle.hpp"

namespace avta {

/// Lower bound on sigma* from a gamma lower bound: gamma * rho* / R.
inline double sigma_from_gamma(double gamma, double rho_star, double R) {
    if (!(gamma > 0.0) || !(rho_star > 0.0) || !(R > 0.0))
        throw std::invalid_argument("sigma_from_gamma: inputs must be positive");
    return gamma * rho_star / R;
}

struct PerturbationReport {
    std::vector<Index> superset_indices;       // phase-1 output, discovery order
    std::vector<Index> pruned_indices;         // survivors after phase 2 (the claimed vertex set)
    std::vector<Index> removed_indices;        // removal order
    // distance from each superset member to the hull of the other surviving
    // members, as last evaluated
    std::vector<std::pair<Index, double>> distance_certificates;
    double sigma_used = 0.0;
    double epsilon_assumed = 0.0;
    double R = 0.0;
    std::uint64_t seed = 0;
    long total_pivots = 0;
    long membership_calls = 0;
};

/// Vertex recovery on perturbed data. Phase 1 runs the vertex-growing loop
/// at threshold sigma/2, producing a superset of the perturbed images of the
/// true vertices. Phase 2 removes spurious members: any member closer than
/// sigma*R/2 to the hull of the remaining members, most-interior first,
/// recomputing distances after every removal.
inline PerturbationReport avta_robust(const PointSet& ps_eps, double sigma,
                                      double epsilon, std::uint64_t seed = 0) {
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw std::invalid_argument("avta_robust: sigma must be in (0,1]");
    if (epsilon < 0.0)
        throw std::invalid_argument("avta_robust: epsilon must be nonnegative");
    if (4.0 * epsilon > sigma)
        throw std::invalid_argument("avta_robust: hypothesis 4*epsilon <= sigma violated");

    VertexReport phase1 = detail::grow_vertices(ps_eps, sigma / 2.0, seed);

    PerturbationReport rep;
    rep.superset_indices = phase1.vertex_indices;
    rep.sigma_used = sigma;
    rep.epsilon_assumed = epsilon;
    rep.R = phase1.R;
    rep.seed = seed;
    rep.total_pivots = phase1.total_pivots;
    rep.membership_calls = phase1.membership_calls;

    std::vector<Index> kept = phase1.vertex_indices;
    const double threshold = sigma * rep.R / 2.0;

    while (kept.size() > 1) {
        // Distance of each member to the others' hull; the decision routine
        // refines until its upper/lower bounds separate from the threshold.
        std::vector<std::pair<Index, double>> certs;
        Index worst = -1;
        double worst_dist = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < kept.size(); ++a) {
            std::vector<Index> others;
            others.reserve(kept.size() - 1);
            for (std::size_t b = 0; b < kept.size(); ++b)
                if (b != a) others.push_back(kept[b]);
            const DistanceDecision dec = distance_below_threshold(
                ps_eps, others, ps_eps.point(kept[a]), threshold);
            ++rep.membership_calls;
            certs.emplace_back(kept[a], dec.distance_estimate);
            if (dec.below && dec.distance_estimate < worst_dist) {
                worst_dist = dec.distance_estimate;
                worst = kept[a];
            }
        }
        rep.distance_certificates = certs;
        if (worst < 0) break; // fixed point: nobody below threshold
        kept.erase(std::find(kept.begin(), kept.end(), worst));
        rep.removed_indices.push_back(worst);
    }
    rep.pruned_indices = kept;
    return rep;
}

struct VoteResult {
    std::vector<Index> indices; // top-K by frequency, ties by smaller index
    std::vector<std::pair<Index, long>> tally;
    bool short_of_k = false;    // fewer distinct tallied indices than K
};

/// Runs the gamma-mode vertex search on M independently seeded random
/// projections and keeps the K most frequently reported original indices.
/// target_dim <= 0 selects the default ceil(4 ln n / gamma^2), capped at m.
inline VoteResult multi_projection_vote(const PointSet& ps, int K, double gamma,
                                        int M, Index target_dim,
                                        std::uint64_t seed = 0) {
    if (K < 1) throw std::invalid_argument("multi_projection_vote: K must be positive");
    if (M < 1) throw std::invalid_argument("multi_projection_vote: M must be positive");
    if (target_dim <= 0)
        target_dim = choose_target_dim(ps.size(), gamma, ps.dim());

    std::mt19937_64 master(seed);
    std::map<Index, long> freq;
    for (int round = 0; round < M; ++round) {
        const std::uint64_t round_seed = master();
        const JlMap map = JlMap::gaussian(ps.dim(), target_dim, round_seed);
        const PointSet image = project(map, ps);
        const VertexReport rep = avta_gamma(image, gamma, round_seed);
        for (Index i : rep.vertex_indices) ++freq[i];
    }

    std::vector<std::pair<Index, long>> tally(freq.begin(), freq.end());
    std::sort(tally.begin(), tally.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    VoteResult out;
    out.tally = tally;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(K), tally.size());
    out.short_of_k = take < static_cast<std::size_t>(K);
    for (std::size_t i = 0; i < take; ++i) out.indices.push_back(tally[i].first);
    return out;
}

} // namespace avta
