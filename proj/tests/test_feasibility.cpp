#include <doctest.h>

#include <random>

#include "cmssc/feasibility.hpp"
#include "test_support.hpp"

using namespace cmssc;

TEST_CASE("a cannot-link triangle is not 2-colorable") {
    std::vector<IndexPair> cl{{0, 1}, {1, 2}, {0, 2}};
    CHECK(!check_feasible(3, 2, cl).feasible());
}

TEST_CASE("the same triangle is 3-colorable by a permutation") {
    std::vector<IndexPair> cl{{0, 1}, {1, 2}, {0, 2}};
    FeasibilityResult res = check_feasible(3, 3, cl);
    REQUIRE(res.feasible());
    const auto& a = *res.assignment;
    CHECK(testsup::surjective(a, 3));
    CHECK(a[0] != a[1]);
    CHECK(a[1] != a[2]);
    CHECK(a[0] != a[2]);
}

TEST_CASE("fewer vertices than colors is infeasible") {
    CHECK(!check_feasible(2, 3, {}).feasible());
}

TEST_CASE("witness always uses every label") {
    // no constraints: any coloring works but all k labels must appear
    FeasibilityResult res = check_feasible(6, 4, {});
    REQUIRE(res.feasible());
    CHECK(testsup::surjective(*res.assignment, 4));
}

TEST_CASE("agrees with exhaustive assignment enumeration") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> sd(2, 9);
    int done = 0;
    while (done < 500) {
        int s = sd(rng);
        std::uniform_int_distribution<int> kd(1, std::min(4, s));
        int k = kd(rng);
        std::uniform_int_distribution<int> cld(0, s);
        std::uniform_int_distribution<int> pick(0, s - 1);
        std::vector<IndexPair> cl;
        int m = cld(rng);
        for (int t = 0; t < m; ++t) {
            int i = pick(rng), j = pick(rng);
            if (i != j) cl.push_back(make_pair_sorted(i, j));
        }

        // reference: scan all k^s labelings directly
        ConstraintSet cons;
        for (const auto& [i, j] : cl) cons.add_cl(i, j);
        bool expected = !testsup::enumerate_feasible(s, cons, k).empty();

        FeasibilityResult res = check_feasible(s, k, cl);
        CHECK(res.feasible() == expected);
        if (res.feasible()) {
            const auto& a = *res.assignment;
            CHECK(testsup::surjective(a, k));
            for (const auto& [i, j] : cl) CHECK(a[i] != a[j]);
        }
        ++done;
    }
}
