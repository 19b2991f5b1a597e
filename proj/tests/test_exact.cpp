#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "avta/exact.hpp"
#include "avta/triangle.hpp"

using namespace avta;
using exact::LpStatus;
using exact::Rat;

TEST_CASE("lp_solve on hand-checked problems") {
    // min -x1 - x2 s.t. x1 + x3 = 1, x2 + x4 = 1, x >= 0  ->  value -2
    exact::RatMat A = {{1, 0, 1, 0}, {0, 1, 0, 1}};
    exact::RatVec b = {1, 1};
    exact::RatVec c = {-1, -1, 0, 0};
    const auto r = exact::lp_solve(A, b, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rat(-2));
    CHECK(r.x[0] == Rat(1));
    CHECK(r.x[1] == Rat(1));
}

TEST_CASE("lp_solve detects infeasibility") {
    // x1 = 1 and x1 = 2 simultaneously
    exact::RatMat A = {{1}, {1}};
    exact::RatVec b = {1, 2};
    exact::RatVec c = {0};
    CHECK(exact::lp_solve(A, b, c).status == LpStatus::Infeasible);
}

TEST_CASE("lp_solve detects unboundedness") {
    // min -x1 s.t. x1 - x2 = 0: push both to infinity
    exact::RatMat A = {{1, -1}};
    exact::RatVec b = {0};
    exact::RatVec c = {-1, 0};
    CHECK(exact::lp_solve(A, b, c).status == LpStatus::Unbounded);
}

TEST_CASE("lp_solve handles redundant rows") {
    exact::RatMat A = {{1, 1}, {2, 2}};
    exact::RatVec b = {1, 2};
    exact::RatVec c = {1, 0};
    const auto r = exact::lp_solve(A, b, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == Rat(0));
}

TEST_CASE("exact hull membership") {
    Matrix tri(3, 2);
    tri << 0, 0, 1, 0, 0, 1;
    const PointSet ps(tri);
    Vector in(2), edge(2), out(2);
    in << 0.25, 0.25;
    edge << 0.5, 0.5;
    out << 0.5000001, 0.5000001;
    CHECK(exact::in_hull_exact(ps, {0, 1, 2}, in));
    CHECK(exact::in_hull_exact(ps, {0, 1, 2}, edge)); // boundary is in
    CHECK_FALSE(exact::in_hull_exact(ps, {0, 1, 2}, out));
}

TEST_CASE("vertex tests on square plus center") {
    Matrix sq(5, 2);
    sq << 0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5;
    const PointSet ps(sq);
    CHECK(exact::vertex_set_exact(ps) == std::vector<Index>{0, 1, 2, 3});
    CHECK(exact::is_vertex_exact(ps, 0));
    CHECK_FALSE(exact::is_vertex_exact(ps, 4));
}

TEST_CASE("exact distance to hull on known geometry") {
    Matrix seg(2, 2);
    seg << 0, 0, 1, 0;
    const PointSet ps(seg);
    Vector p(2);
    p << 2, 0;
    CHECK(exact::dist2_to_hull_exact(ps, {0, 1}, p) == Rat(1));
    p << 0.5, 3;
    CHECK(exact::dist2_to_hull_exact(ps, {0, 1}, p) == Rat(9));
    p << 0.5, 0;
    CHECK(exact::dist2_to_hull_exact(ps, {0, 1}, p) == Rat(0));

    Matrix tri(3, 2);
    tri << 0, 0, 2, 0, 0, 2;
    const PointSet tps(tri);
    Vector q(2);
    q << 2, 2; // nearest hull point is (1,1) on the hypotenuse
    CHECK(exact::dist2_to_hull_exact(tps, {0, 1, 2}, q) == Rat(2));
}

TEST_CASE("exact distance agrees with the iterative closest point") {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix pts(7, 3);
        for (Index i = 0; i < 7; ++i)
            for (Index j = 0; j < 3; ++j) pts(i, j) = gauss(rng);
        const PointSet ps(pts);
        Vector q(3);
        for (Index j = 0; j < 3; ++j) q(j) = 2.0 * gauss(rng);
        std::vector<Index> all{0, 1, 2, 3, 4, 5, 6};
        const double exact_d = exact::dist_to_hull(ps, all, q);
        const auto cp = closest_point(ps, all, q, 1e-13);
        CHECK(cp.distance == Catch::Approx(exact_d).margin(1e-5));
        CHECK(cp.distance >= exact_d - 1e-10); // iterative value is an upper bound
    }
}

TEST_CASE("gamma and sigma measurements on square plus center") {
    Matrix sq(5, 2);
    sq << 0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5;
    const PointSet ps(sq);
    const auto verts = exact::vertex_set_exact(ps);
    // each corner is sqrt(2)/2 from the diagonal through the other three
    CHECK(exact::gamma_star_distance(ps, verts) == Catch::Approx(std::sqrt(0.5)));
    // the center sits on the diagonal already, so it does not move any
    // corner's distance to the hull of the rest
    CHECK(exact::sigma_star_distance(ps, verts) == Catch::Approx(std::sqrt(0.5)));
    CHECK(exact::sigma_star_distance(ps, verts) <= exact::gamma_star_distance(ps, verts));
}

TEST_CASE("double-facing LP wrappers") {
    Matrix A(2, 3);
    A << 1, 0, 1, 0, 1, 1;
    Vector b(2);
    b << 1, 1;
    Vector c(3);
    c << 3, 3, 5;
    CHECK(exact::lp_feasible_double(A, b));
    const auto v = exact::lp_solve_double(A, b, c);
    REQUIRE(v.status == LpStatus::Optimal);
    CHECK(v.value == Catch::Approx(5.0)); // x = (0,0,1) beats (1,1,0)
    Vector bad(2);
    bad << -1, 0;
    CHECK_FALSE(exact::lp_feasible_double(A, bad));
}
