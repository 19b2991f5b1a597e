#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "avta/datagen.hpp"
#include "avta/exact.hpp"
#include "avta/lp.hpp"

using namespace avta;

namespace {

/// m x n system whose first K columns are generators and whose remaining
/// columns are convex combinations of them.
LinearSystem combo_system(int K, int n, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix A(m, n);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < m; ++i) A(i, j) = unif(rng);
    for (int j = K; j < n; ++j) {
        Vector w(K);
        for (int k = 0; k < K; ++k) w(k) = unif(rng);
        w /= w.sum();
        A.col(j) = A.leftCols(K) * w;
    }
    LinearSystem sys;
    sys.A = std::move(A);
    sys.b = Vector::Zero(m);
    return sys;
}

} // namespace

TEST_CASE("linear system file round trip") {
    LinearSystem sys;
    sys.A = Matrix(2, 3);
    sys.A << 1, 0, 1, 0, 1, 1;
    sys.b = Vector(2);
    sys.b << 1, 1;
    sys.c = Vector(3);
    *sys.c << 3, 1, 4;
    write_linear_system("/tmp/avta_lp_sys.csv", sys);
    const LinearSystem back = read_linear_system("/tmp/avta_lp_sys.csv", true);
    CHECK(back.A == sys.A);
    CHECK(back.b == sys.b);
    REQUIRE(back.c.has_value());
    CHECK(*back.c == *sys.c);

    // reading a file that has a cost row without asking for one fails the
    // shape validation instead of silently absorbing c into A
    CHECK_THROWS_AS(read_linear_system("/tmp/avta_lp_sys.csv", false),
                    std::invalid_argument);
}

TEST_CASE("feasibility pruning keeps affinely independent columns") {
    LinearSystem sys;
    sys.A = Matrix(2, 3);
    sys.A << 1, 0, 1, 0, 1, 1;
    sys.b = Vector(2);
    sys.b << 1, 1;
    const PruneResult r = prune_columns_feasibility(sys, 0.3, 1);
    CHECK(r.kept == std::vector<Index>{0, 1, 2});
    CHECK(r.reduced.A == sys.A);
}

TEST_CASE("duplicate columns collapse under the dedup flag") {
    LinearSystem sys;
    sys.A = Matrix(2, 4);
    sys.A << 1, 0, 1, 1, 0, 1, 0, 1;
    sys.b = Vector(2);
    sys.b << 1, 1;
    CHECK(dedup_column_indices(sys.A) == std::vector<Index>{0, 1, 3});
    const PruneResult r = prune_columns_feasibility(sys, 0.3, 1, /*dedup=*/true);
    CHECK(r.kept == std::vector<Index>{0, 1, 3});
}

TEST_CASE("feasibility equivalence on seeded systems") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int feasible_seen = 0, infeasible_seen = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        LinearSystem sys = combo_system(10, 60, 4, 2000 + seed);
        for (int q = 0; q < 5; ++q) {
            Vector b(4);
            if (q % 2 == 0) { // feasible by construction
                Vector x(60);
                for (int j = 0; j < 60; ++j) x(j) = unif(rng) < 0.2 ? unif(rng) : 0.0;
                b = sys.A * x;
            } else {
                for (int i = 0; i < 4; ++i) b(i) = gauss(rng);
            }
            sys.b = b;
            const PruneResult r = prune_columns_feasibility(sys, 0.2, seed);
            const bool full = exact::lp_feasible_double(sys.A, b);
            const bool reduced = exact::lp_feasible_double(r.reduced.A, b);
            CHECK(full == reduced);
            (full ? feasible_seen : infeasible_seen)++;
        }
    }
    CHECK(feasible_seen >= 10);
    CHECK(infeasible_seen >= 5);
}

TEST_CASE("optimization pruning is the identity when all columns are extreme") {
    LinearSystem sys;
    sys.A = Matrix(2, 3);
    sys.A << 1, 0, 1, 0, 1, 1;
    sys.b = Vector(2);
    sys.b << 1, 1;
    Vector c(3);
    c << 1, 2, 5;
    const PruneResult r = prune_columns_optimization(sys, c, 0.3, 1);
    CHECK(r.kept == std::vector<Index>{0, 1, 2});
    REQUIRE(r.reduced.c.has_value());
    CHECK(*r.reduced.c == c);
}

TEST_CASE("a duplicated column with identical cost is prunable") {
    LinearSystem sys;
    sys.A = Matrix(2, 4);
    sys.A << 1, 0, 1, 1, 0, 1, 1, 0;
    sys.b = Vector(2);
    sys.b << 1, 1;
    Vector c(4);
    c << 1, 2, 3, 1; // column 3 duplicates column 0 with the same cost entry
    const PruneResult r = prune_columns_optimization(sys, c, 0.3, 1, /*dedup=*/true);
    CHECK(std::find(r.kept.begin(), r.kept.end(), 3) == r.kept.end());
    CHECK(std::find(r.kept.begin(), r.kept.end(), 0) != r.kept.end());
}

TEST_CASE("optimal values survive optimization pruning") {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        // extras must be combinations of the stacked (cost, column) pairs,
        // otherwise dropping them can genuinely change the optimum
        const int K = 8, n = 40, m = 3;
        std::mt19937_64 gen(3000 + seed);
        Matrix A(m, n);
        Vector c(n);
        for (int j = 0; j < K; ++j) {
            for (int i = 0; i < m; ++i) A(i, j) = unif(gen);
            c(j) = unif(gen);
        }
        for (int j = K; j < n; ++j) {
            Vector w(K);
            for (int k = 0; k < K; ++k) w(k) = unif(gen);
            w /= w.sum();
            A.col(j) = A.leftCols(K) * w;
            c(j) = c.head(K).dot(w);
        }
        LinearSystem sys;
        sys.A = A;
        Vector x(n);
        for (int j = 0; j < n; ++j) x(j) = unif(rng) < 0.25 ? unif(rng) : 0.0;
        sys.b = sys.A * x; // feasible by construction

        const PruneResult r = prune_columns_optimization(sys, c, 0.05, seed);
        const auto full = exact::lp_solve_double(sys.A, sys.b, c);
        REQUIRE(r.reduced.c.has_value());
        const auto reduced = exact::lp_solve_double(r.reduced.A, sys.b, *r.reduced.c);
        REQUIRE(full.status == exact::LpStatus::Optimal);
        REQUIRE(reduced.status == exact::LpStatus::Optimal);
        CHECK(std::abs(full.value - reduced.value) < 1e-6);
    }
}

TEST_CASE("cone feasibility on hand instances") {
    LinearSystem sys;
    sys.A = Matrix(2, 3);
    sys.A << 1, 0, 1, 0, 1, 1;
    sys.b = Vector(2);
    sys.b << 1, 1;
    CHECK(cone_feasibility(sys, 0.3, 1e-6, 1).feasible); // x = (0,0,1)

    sys.b << -1, 0;
    CHECK_FALSE(cone_feasibility(sys, 0.3, 1e-6, 1).feasible);

    sys.b << 0, 0;
    CHECK(cone_feasibility(sys, 0.3, 1e-6, 1).feasible); // x = 0
}

TEST_CASE("anchor fallback and failure") {
    // ones-anchor fails (a column with negative sum) but the normalized
    // column-direction mean still works
    LinearSystem sys;
    sys.A = Matrix(2, 2);
    sys.A << 1, 1, 0.5, -2;
    sys.b = Vector(2);
    sys.b << 2, -1.5; // sum of the two columns
    const ConeResult r = cone_feasibility(sys, 0.3, 1e-6, 1);
    CHECK(r.feasible);

    // opposite columns: no anchor can make both strictly positive
    LinearSystem bad;
    bad.A = Matrix(2, 2);
    bad.A << 1, -1, 0, 0;
    bad.b = Vector(2);
    bad.b << 1, 0;
    CHECK_THROWS_AS(cone_feasibility(bad, 0.3, 1e-6, 1), AnchorError);
}

TEST_CASE("cone feasibility agrees with the oracle on seeded instances") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int feas = 0, infeas = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const ConeInstance inst = gen_cone_instance(10, 60, 5, 10.0, 4000 + seed);
        LinearSystem sys = inst.system;
        for (int q = 0; q < 6; ++q) {
            Vector b(5);
            if (q % 2 == 0) {
                Vector x(60);
                for (int j = 0; j < 60; ++j) x(j) = unif(rng) < 0.15 ? unif(rng) : 0.0;
                b = sys.A * x;
            } else {
                for (int i = 0; i < 5; ++i) b(i) = unif(rng);
            }
            sys.b = b;
            const ConeResult r = cone_feasibility(sys, 0.2, 1e-7, seed);
            const bool oracle = exact::lp_feasible_double(sys.A, b);
            CHECK(r.feasible == oracle);
            (oracle ? feas : infeas)++;
        }
    }
    CHECK(feas >= 10);
    CHECK(infeas >= 3);
}
