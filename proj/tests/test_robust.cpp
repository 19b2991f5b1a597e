#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "avta/datagen.hpp"
#include "avta/exact.hpp"
#include "avta/robust.hpp"

using namespace avta;

namespace {

Matrix square_plus_center() {
    Matrix m(5, 2);
    m << 0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5;
    return m;
}

bool same_set(std::vector<Index> a, std::vector<Index> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

/// Moves every point by a random offset of norm at most eps * R.
PointSet perturb(const PointSet& ps, double eps, std::uint64_t seed) {
    const double R = diameter(ps);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix out = ps.points();
    for (Index i = 0; i < out.rows(); ++i) {
        Vector dir(out.cols());
        for (Index j = 0; j < out.cols(); ++j) dir(j) = gauss(rng);
        const double norm = dir.norm();
        if (norm > 0.0) out.row(i) += (unif(rng) * eps * R / norm) * dir.transpose();
    }
    return PointSet(std::move(out));
}

} // namespace

TEST_CASE("sigma_from_gamma") {
    CHECK(sigma_from_gamma(0.5, 1.0, 2.0) == Catch::Approx(0.25));
    // two-point set: rho* = R, so the bound is gamma itself
    CHECK(sigma_from_gamma(0.37, 5.0, 5.0) == Catch::Approx(0.37));
    CHECK_THROWS_AS(sigma_from_gamma(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_from_gamma(0.5, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sigma_from_gamma lower-bounds the oracle sigma*") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        InstanceSpec spec;
        spec.K = 5;
        spec.n = 20;
        spec.m = 3;
        spec.seed = 100 + seed;
        const HullInstance inst = gen_hull_instance(spec);
        const auto verts = exact::vertex_set_exact(inst.points);
        const double R = diameter(inst.points);
        const double rho = min_pairwise_distance(inst.points).value;
        const double gamma_star = exact::gamma_star_distance(inst.points, verts) / R;
        const double sigma_star = exact::sigma_star_distance(inst.points, verts) / R;
        CHECK(sigma_star + 1e-12 >= sigma_from_gamma(gamma_star, rho, R));
    }
}

TEST_CASE("avta_robust on clean data reduces to the gamma search") {
    const PointSet ps(square_plus_center());
    const PerturbationReport rep = avta_robust(ps, 0.4, 0.0, 7);
    CHECK(same_set(rep.superset_indices, {0, 1, 2, 3}));
    CHECK(rep.pruned_indices == rep.superset_indices);
    CHECK(rep.removed_indices.empty());

    const VertexReport plain = avta_gamma(ps, 0.4, 7);
    CHECK(rep.superset_indices == plain.vertex_indices);
}

TEST_CASE("avta_robust validates its hypothesis") {
    const PointSet ps(square_plus_center());
    CHECK_THROWS_AS(avta_robust(ps, 0.2, 0.1, 1), std::invalid_argument); // 4e > sigma
    CHECK_THROWS_AS(avta_robust(ps, 0.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(avta_robust(ps, 0.3, -0.1, 1), std::invalid_argument);
}

TEST_CASE("a near-edge spurious vertex is removed") {
    // square corners plus a point just inside the right edge, perturbed to
    // just outside: a vertex of the perturbed hull, but within 2*eps*R of
    // the corners' hull
    Matrix m(5, 2);
    m << 0, 0, 1, 0, 1, 1, 0, 1, 1.001, 0.5;
    const PointSet ps(m);
    REQUIRE(exact::is_vertex_exact(ps, 4)); // genuinely a hull vertex
    const PerturbationReport rep = avta_robust(ps, 0.3, 2e-3, 3);
    CHECK(same_set(rep.pruned_indices, {0, 1, 2, 3}));
    for (Index i : rep.pruned_indices) CHECK(i != 4);
}

TEST_CASE("perturbed instances: exactly the images of the true vertices") {
    int done = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        InstanceSpec spec;
        spec.K = 5;
        spec.n = 25;
        spec.m = 3;
        spec.seed = 300 + seed;
        const HullInstance inst = gen_hull_instance(spec);
        const auto verts = exact::vertex_set_exact(inst.points);
        REQUIRE(same_set(verts, inst.true_vertices));
        const double R = diameter(inst.points);
        const double sigma_star = exact::sigma_star_distance(inst.points, verts) / R;
        if (sigma_star < 0.02) continue; // too fragile to perturb meaningfully

        const double eps = sigma_star / 5.0;
        const double sigma = 0.9 * sigma_star;
        const PointSet perturbed = perturb(inst.points, eps, 400 + seed);
        const PerturbationReport rep = avta_robust(perturbed, sigma, eps, seed);
        CHECK(same_set(rep.pruned_indices, inst.true_vertices));
        ++done;
    }
    CHECK(done >= 4);
}

TEST_CASE("phase-2 certificates justify every removal") {
    Matrix m(6, 2);
    m << 0, 0, 1, 0, 1, 1, 0, 1, 1.0005, 0.5, -0.0005, 0.5;
    const PointSet ps(m);
    const PerturbationReport rep = avta_robust(ps, 0.3, 1e-3, 9);
    const double threshold = 0.3 * rep.R / 2.0;
    for (Index removed : rep.removed_indices) {
        // removed members really are close to the hull of the survivors+peers
        std::vector<Index> others;
        for (Index i : rep.superset_indices)
            if (i != removed) others.push_back(i);
        CHECK(exact::dist_to_hull(ps, others, ps.point(removed)) < threshold);
    }
    for (Index kept : rep.pruned_indices) {
        std::vector<Index> others;
        for (Index i : rep.pruned_indices)
            if (i != kept) others.push_back(i);
        if (others.empty()) continue;
        CHECK(exact::dist_to_hull(ps, others, ps.point(kept)) >= threshold - 1e-9);
    }
}

TEST_CASE("multi projection vote on the square") {
    const PointSet ps(square_plus_center());
    const VoteResult vote = multi_projection_vote(ps, 4, 0.04, 3, 2, 17);
    CHECK(same_set(vote.indices, {0, 1, 2, 3}));
    CHECK_FALSE(vote.short_of_k);
    for (const auto& [idx, freq] : vote.tally) {
        if (idx <= 3) CHECK(freq == 3);
        else CHECK(freq == 0); // center never tallied at all
    }

    // K beyond what was tallied: shorter list plus the flag
    const VoteResult big = multi_projection_vote(ps, 10, 0.04, 3, 2, 17);
    CHECK(big.short_of_k);
    CHECK(big.indices.size() == big.tally.size());
}

TEST_CASE("multi projection vote boundary cases") {
    Matrix two(2, 3);
    two << 0, 0, 0, 1, 2, 3;
    const VoteResult v = multi_projection_vote(PointSet(two), 2, 0.3, 4, 2, 5);
    CHECK(same_set(v.indices, {0, 1}));

    CHECK_THROWS_AS(multi_projection_vote(PointSet(two), 0, 0.3, 1, 2, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(multi_projection_vote(PointSet(two), 1, 0.3, 0, 2, 5),
                    std::invalid_argument);
}

TEST_CASE("every tallied index is a true vertex of the original") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        InstanceSpec spec;
        spec.K = 6;
        spec.n = 30;
        spec.m = 6;
        spec.seed = 500 + seed;
        const HullInstance inst = gen_hull_instance(spec);
        const VoteResult vote = multi_projection_vote(inst.points, 6, 0.3, 3, 4, seed);
        for (const auto& [idx, freq] : vote.tally) {
            if (freq > 0) CHECK(exact::is_vertex_exact(inst.points, idx));
        }
    }
}
