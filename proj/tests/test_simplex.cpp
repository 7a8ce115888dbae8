#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "era/simplex.hpp"

using namespace era;
using Status = SimplexSolver::Status;

TEST_CASE("one variable, one constraint") {
    auto r = SimplexSolver::solve({{1.0}}, {4.0}, {3.0});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(12.0));
    CHECK(r.x[0] == doctest::Approx(4.0));
}

TEST_CASE("classic two-variable LP") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    auto r = SimplexSolver::solve({{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(36.0));
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(6.0));
}

TEST_CASE("binding knapsack-style rows") {
    // max x1 + 2x2 + 3x3 s.t. x1+x2+x3 <= 10, x3 <= 3, x2 + x3 <= 5
    auto r = SimplexSolver::solve({{1, 1, 1}, {0, 0, 1}, {0, 1, 1}}, {10, 3, 5}, {1, 2, 3});
    REQUIRE(r.status == Status::optimal);
    // x3 = 3, x2 = 2, x1 = 5 -> 5 + 4 + 9 = 18
    CHECK(r.objective == doctest::Approx(18.0));
}

TEST_CASE("unbounded direction detected") {
    // max x + y with only x <= 1: y is free upward
    auto r = SimplexSolver::solve({{1, 0}}, {1}, {1, 1});
    CHECK(r.status == Status::unbounded);
}

TEST_CASE("infeasible via negative rhs") {
    // x <= -1 with x >= 0 has no solution
    auto r = SimplexSolver::solve({{1}}, {-1}, {1});
    CHECK(r.status == Status::infeasible);
}

TEST_CASE("negative rhs but feasible needs phase one") {
    // -x <= -2 (x >= 2), x <= 5, max x -> 5
    auto r = SimplexSolver::solve({{-1}, {1}}, {-2, 5}, {1});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(5.0));
}

TEST_CASE("minimization via negated objective") {
    // min x1 + x2 s.t. x1 + x2 >= 3 (i.e. -x1 - x2 <= -3)
    auto r = SimplexSolver::solve({{-1, -1}}, {-3}, {-1, -1});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(-3.0));
}

TEST_CASE("degenerate tie in the pivot column still terminates") {
    auto r = SimplexSolver::solve({{1, 1}, {1, 1}, {1, 0}}, {2, 2, 2}, {2, 1});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(4.0));
}

TEST_CASE("zero objective returns a feasible point") {
    auto r = SimplexSolver::solve({{1, 1}}, {3}, {0, 0});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(0.0));
}
