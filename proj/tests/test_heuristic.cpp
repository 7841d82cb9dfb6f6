#include <doctest.h>

#include <random>

#include "cmssc/heuristic.hpp"
#include "cmssc/oracle.hpp"
#include "cmssc/sdp.hpp"
#include "test_support.hpp"

using namespace cmssc;

namespace {

ReducedInstance reduce_or_die(const Dataset& d, const ConstraintSet& cons, int k) {
    auto rr = reduce(d, cons, k);
    REQUIRE(!is_infeasible(rr));
    return std::get<ReducedInstance>(rr);
}

}  // namespace

TEST_CASE("rounding a block clustering matrix recovers its blocks") {
    Dataset d;
    d.points = Matrix(6, 1);
    d.points << 0.0, 0.5, 1.0, 9.0, 9.5, 10.0;
    ReducedInstance red = reduce_or_die(d, {}, 2);

    std::vector<int> labels{0, 0, 0, 1, 1, 1};
    Matrix z = testsup::clustering_matrix(labels, red.sizes, 2);
    Matrix centroids = sdp_round_init(z, red, 5);

    // exact cluster centroids, in some order
    std::vector<double> got{centroids(0, 0), centroids(1, 0)};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(0.5));
    CHECK(got[1] == doctest::Approx(9.5));
}

TEST_CASE("k=1 rounding returns the global mean") {
    Dataset d;
    d.points = Matrix(4, 1);
    d.points << 1.0, 2.0, 3.0, 6.0;
    ReducedInstance red = reduce_or_die(d, {}, 1);
    Matrix z = Matrix::Constant(4, 4, 0.25);
    Matrix centroids = sdp_round_init(z, red, 0);
    REQUIRE(centroids.rows() == 1);
    CHECK(centroids(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("a lightly perturbed block matrix still rounds to the blocks") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    Dataset d;
    d.points = Matrix(6, 2);
    d.points << 0, 0, 0.5, 0, 1, 0, 9, 9, 9.5, 9, 10, 9;
    ReducedInstance red = reduce_or_die(d, {}, 2);

    std::vector<int> labels{0, 0, 0, 1, 1, 1};
    Matrix z = testsup::clustering_matrix(labels, red.sizes, 2);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) z(i, j) += 1e-3 * g(rng);

    Matrix centroids = sdp_round_init(z, red, 5);
    std::vector<double> got{centroids(0, 0), centroids(1, 0)};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(got[1] == doctest::Approx(9.5).epsilon(1e-6));
}

TEST_CASE("unconstrained assignment takes the nearest centroid") {
    Dataset d;
    d.points = Matrix(4, 1);
    d.points << 0.0, 1.0, 10.0, 11.0;
    ReducedInstance red = reduce_or_die(d, {}, 2);
    Matrix centroids(2, 1);
    centroids << 0.5, 10.5;
    auto res = constrained_assignment(centroids, red);
    REQUIRE(std::holds_alternative<Assignment>(res));
    const Assignment& a = std::get<Assignment>(res);
    CHECK(a.labels == std::vector<int>{0, 0, 1, 1});
    CHECK(a.objective == doctest::Approx(1.0));
}

TEST_CASE("a cannot-link displaces the cheaper of the two contenders") {
    Dataset d;
    d.points = Matrix(3, 1);
    d.points << 0.0, 0.2, 10.0;
    ConstraintSet cons;
    cons.add_cl(0, 1);
    ReducedInstance red = reduce_or_die(d, cons, 2);
    Matrix centroids(2, 1);
    centroids << 0.1, 10.0;
    auto res = constrained_assignment(centroids, red);
    REQUIRE(std::holds_alternative<Assignment>(res));
    const Assignment& a = std::get<Assignment>(res);
    // 0 and 1 cannot share; moving either to centroid 1 is costly, the
    // exact solver sends the one that hurts less (1 is 0.2 away vs 0)
    CHECK(a.labels[0] != a.labels[1]);
    CHECK(a.labels[2] == a.labels[1]);
}

TEST_CASE("assignment matches exhaustive enumeration") {
    std::mt19937_64 rng(63);
    std::normal_distribution<double> g;
    int checked = 0;
    for (int trial = 0; trial < 80 && checked < 30; ++trial) {
        auto inst = testsup::random_instance(rng, 4, 8, 2, 3);
        auto rr = reduce(inst.data, inst.cons, inst.k);
        if (is_infeasible(rr)) continue;
        const ReducedInstance& red = std::get<ReducedInstance>(rr);

        Matrix centroids(inst.k, inst.data.d());
        for (int c = 0; c < inst.k; ++c)
            for (int j = 0; j < inst.data.d(); ++j) centroids(c, j) = g(rng);

        auto res = constrained_assignment(centroids, red);

        // reference: scan every surjective CL-respecting labeling and
        // minimize the weighted center distance directly
        ConstraintSet lifted;
        for (const auto& [a, b] : red.lifted_cl) lifted.add_cl(a, b);
        auto feasible = testsup::enumerate_feasible(red.s(), lifted, red.k);
        if (feasible.empty()) {
            CHECK(std::holds_alternative<Infeasibility>(res));
            continue;
        }
        REQUIRE(std::holds_alternative<Assignment>(res));
        const Assignment& a = std::get<Assignment>(res);

        Matrix means = red.component_means();
        double best_cost = std::numeric_limits<double>::infinity();
        for (const auto& labels : feasible) {
            double cost = 0.0;
            for (int i = 0; i < red.s(); ++i)
                cost += red.sizes(i) *
                        (means.row(i) - centroids.row(labels[i])).squaredNorm();
            best_cost = std::min(best_cost, cost);
        }
        double got_cost = 0.0;
        for (int i = 0; i < red.s(); ++i)
            got_cost += red.sizes(i) *
                        (means.row(i) - centroids.row(a.labels[i])).squaredNorm();
        CHECK(got_cost == doctest::Approx(best_cost).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("ipc-k-means is a fixpoint at the optimum") {
    Dataset d;
    d.points = Matrix(4, 1);
    d.points << 0.0, 1.0, 8.0, 9.0;
    ReducedInstance red = reduce_or_die(d, {}, 2);

    Matrix opt_centroids(2, 1);
    opt_centroids << 0.5, 8.5;
    IpcTrace trace;
    auto res = ipc_kmeans(red, opt_centroids, {}, &trace);
    REQUIRE(std::holds_alternative<Assignment>(res));
    const Assignment& a = std::get<Assignment>(res);
    CHECK(a.objective == doctest::Approx(1.0));
    CHECK(a.centroids.isApprox(opt_centroids, 1e-12));
    // no improvement after the first pass
    for (double obj : trace.objectives) CHECK(obj == doctest::Approx(1.0));
}

TEST_CASE("infeasible systems surface on the first assignment call") {
    Dataset d;
    d.points = Matrix(3, 1);
    d.points << 0.0, 1.0, 2.0;
    ConstraintSet cons;
    cons.add_cl(0, 1);
    cons.add_cl(1, 2);
    cons.add_cl(0, 2);
    auto rr = reduce(d, cons, 2);
    REQUIRE(!is_infeasible(rr));  // reduction alone cannot see it
    const ReducedInstance& red = std::get<ReducedInstance>(rr);
    Matrix centroids(2, 1);
    centroids << 0.0, 2.0;
    auto res = ipc_kmeans(red, centroids, {});
    CHECK(std::holds_alternative<Infeasibility>(res));
}

TEST_CASE("descent is monotone and sandwiched by the oracle") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    int checked = 0;
    for (int trial = 0; trial < 80 && checked < 25; ++trial) {
        auto inst = testsup::random_instance(rng, 4, 8, 2, 3);
        auto ref = testsup::enumerate_best(inst.data, inst.cons, inst.k);
        if (!ref) continue;
        auto rr = reduce(inst.data, inst.cons, inst.k);
        if (is_infeasible(rr)) continue;
        const ReducedInstance& red = std::get<ReducedInstance>(rr);

        Matrix init(inst.k, inst.data.d());
        for (int c = 0; c < inst.k; ++c)
            for (int j = 0; j < inst.data.d(); ++j) init(c, j) = 3.0 * g(rng);

        IpcTrace trace;
        auto res = ipc_kmeans(red, init, {}, &trace);
        REQUIRE(std::holds_alternative<Assignment>(res));
        const Assignment& a = std::get<Assignment>(res);

        for (size_t t = 1; t < trace.objectives.size(); ++t)
            CHECK(trace.objectives[t] <= trace.objectives[t - 1] + 1e-9);
        CHECK(a.objective >= ref->objective - 1e-9);
        CHECK(a.objective <= trace.objectives.front() + 1e-9);
        CHECK(testsup::surjective(a.labels, red.k));
        for (const auto& [i, j] : red.lifted_cl) CHECK(a.labels[i] != a.labels[j]);
        CHECK(trace.iterations <= 100);
        ++checked;
    }
    CHECK(checked >= 25);
}

TEST_CASE("degenerate relaxation rows fall back to super-point seeding") {
    Dataset d;
    d.points = Matrix(4, 1);
    d.points << 0.0, 1.0, 8.0, 9.0;
    auto rr = reduce(d, {}, 2);
    const ReducedInstance& red = std::get<ReducedInstance>(rr);

    // every row identical: fewer than k distinct rows
    Matrix z = Matrix::Constant(4, 4, 0.25);
    Matrix centroids = sdp_round_init(z, red, 17);
    REQUIRE(centroids.rows() == 2);
    CHECK(centroids.allFinite());
    // seeds are actual component means, so both lie among the points
    for (int c = 0; c < 2; ++c) {
        bool is_a_point = false;
        for (int i = 0; i < 4; ++i)
            if (std::abs(centroids(c, 0) - d.points(i, 0)) < 1e-12) is_a_point = true;
        CHECK(is_a_point);
    }
}

TEST_CASE("assignment search respects its node cap and stays feasible") {
    Dataset d;
    d.points = Matrix(8, 1);
    d.points << 0, 1, 2, 3, 4, 5, 6, 7;
    ConstraintSet cons;
    cons.add_cl(0, 1);
    auto rr = reduce(d, cons, 3);
    const ReducedInstance& red = std::get<ReducedInstance>(rr);
    Matrix centroids(3, 1);
    centroids << 0.0, 3.5, 7.0;

    bool proven = true;
    auto res = constrained_assignment(centroids, red, 1, &proven);
    REQUIRE(std::holds_alternative<Assignment>(res));
    CHECK(!proven);  // one node cannot close an 8-point search
    const Assignment& a = std::get<Assignment>(res);
    CHECK(testsup::surjective(a.labels, 3));
    CHECK(a.labels[0] != a.labels[1]);
}
