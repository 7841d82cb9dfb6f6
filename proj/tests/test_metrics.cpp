#include <doctest.h>

#include <random>

#include "cmssc/metrics.hpp"
#include "test_support.hpp"

using namespace cmssc;

TEST_CASE("mssc objective on two points in one cluster") {
    Dataset d;
    d.points = Matrix(2, 1);
    d.points << 0.0, 2.0;
    CHECK(mssc_objective(d, {0, 0}) == doctest::Approx(2.0));
}

TEST_CASE("singleton clusters cost nothing") {
    Dataset d;
    d.points = Matrix(3, 2);
    d.points << 0, 0, 5, 5, -3, 7;
    CHECK(mssc_objective(d, {0, 1, 2}) == 0.0);
}

TEST_CASE("objective equals the Gram-form identity") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Dataset d;
    d.points = Matrix(7, 3);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 3; ++j) d.points(i, j) = g(rng);
    std::vector<int> labels{0, 1, 2, 0, 1, 2, 0};

    Matrix w = d.points * d.points.transpose();
    double gram_form = w.trace();
    for (int c = 0; c < 3; ++c) {
        std::vector<int> members;
        for (int i = 0; i < 7; ++i)
            if (labels[i] == c) members.push_back(i);
        double pair_sum = 0.0;
        for (int a : members)
            for (int b : members) pair_sum += w(a, b);
        gram_form -= pair_sum / static_cast<double>(members.size());
    }
    CHECK(mssc_objective(d, labels) == doctest::Approx(gram_form).epsilon(1e-9));
}

TEST_CASE("empty cluster is an error") {
    Dataset d;
    d.points = Matrix(2, 1);
    d.points << 0.0, 1.0;
    CHECK_THROWS_AS(mssc_objective(d, {0, 0}, 2), EmptyCluster);
}

TEST_CASE("ARI basics") {
    std::vector<int> a{0, 0, 1, 1, 2, 2};
    CHECK(ari(a, a) == doctest::Approx(1.0));

    std::vector<int> renamed{2, 2, 0, 0, 1, 1};
    CHECK(ari(a, renamed) == doctest::Approx(1.0));
}

TEST_CASE("ARI of the [[2,1],[1,2]] table") {
    // worked out independently beforehand: value is exactly -1/9
    std::vector<int> truth{0, 0, 0, 1, 1, 1};
    std::vector<int> labels{0, 0, 1, 0, 1, 1};
    CHECK(ari(truth, labels) == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("AMI basics and the crossed 2x2 case") {
    std::vector<int> a{0, 0, 1, 1};
    CHECK(ami(a, a) == doctest::Approx(1.0));

    // worked out independently beforehand: value is exactly -1/2
    std::vector<int> crossed{0, 1, 0, 1};
    CHECK(ami(a, crossed) == doctest::Approx(-0.5).epsilon(1e-12));

    std::vector<int> renamed{1, 1, 0, 0};
    CHECK(ami(a, renamed) == doctest::Approx(1.0));
}

TEST_CASE("ARI and AMI are invariant to relabeling") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> lab(0, 3);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<int> u(20), v(20);
        for (auto& x : u) x = lab(rng);
        for (auto& x : v) x = lab(rng);

        std::vector<int> perm{3, 0, 2, 1};
        std::vector<int> v_perm(v.size());
        for (size_t i = 0; i < v.size(); ++i) v_perm[i] = perm[v[i]];

        CHECK(ari(u, v) == doctest::Approx(ari(u, v_perm)).epsilon(1e-12));
        CHECK(ami(u, v) == doctest::Approx(ami(u, v_perm)).epsilon(1e-12));
        CHECK(ari(u, v) == doctest::Approx(ari(v, u)).epsilon(1e-12));
    }
}

TEST_CASE("ARI of independent partitions hovers near zero") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> lab(0, 2);
    double total = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> u(30), v(30);
        for (auto& x : u) x = lab(rng);
        for (auto& x : v) x = lab(rng);
        total += ari(u, v);
    }
    CHECK(std::abs(total / trials) < 0.05);
}

TEST_CASE("degenerate single-cluster partitions") {
    std::vector<int> ones{0, 0, 0};
    CHECK(ari(ones, ones) == 1.0);
    CHECK(ami(ones, ones) == 1.0);
}

TEST_CASE("relative gap") {
    CHECK(relative_gap(100.0, 99.99) == doctest::Approx(1e-4));
    CHECK(relative_gap(5.0, 5.0) == 0.0);
    CHECK(relative_gap(0.0, 0.0) == 0.0);
}

TEST_CASE("non-contiguous label values evaluate over used clusters only") {
    Dataset d;
    d.points = Matrix(4, 1);
    d.points << 0.0, 2.0, 10.0, 12.0;
    // ids 0 and 5: two used clusters, nothing empty about it
    CHECK(mssc_objective(d, {0, 0, 5, 5}) == doctest::Approx(4.0));
    // an explicit k still demands every cluster nonempty
    CHECK_THROWS_AS(mssc_objective(d, {0, 0, 5, 5}, 6), EmptyCluster);
}
