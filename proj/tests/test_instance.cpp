#include <doctest.h>

#include <random>

#include "cmssc/instance.hpp"
#include "test_support.hpp"

using namespace cmssc;

namespace {

Dataset make_dataset(std::initializer_list<std::initializer_list<double>> rows) {
    Dataset d;
    int n = static_cast<int>(rows.size());
    int dim = static_cast<int>(rows.begin()->size());
    d.points = Matrix(n, dim);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) d.points(i, j++) = v;
        ++i;
    }
    return d;
}

}  // namespace

TEST_CASE("gram matrix of 1-d points") {
    Dataset d = make_dataset({{0.0}, {1.0}});
    Matrix w = gram_matrix(d);
    CHECK(w(0, 0) == 0.0);
    CHECK(w(0, 1) == 0.0);
    CHECK(w(1, 0) == 0.0);
    CHECK(w(1, 1) == 1.0);
}

TEST_CASE("gram matrix of orthonormal rows is the identity") {
    Dataset d = make_dataset({{1.0, 0.0}, {0.0, 1.0}});
    Matrix w = gram_matrix(d);
    CHECK(w.isApprox(Matrix::Identity(2, 2)));
}

TEST_CASE("gram matrix matches an explicit dot-product loop") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Dataset d;
    d.points = Matrix(5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) d.points(i, j) = g(rng);
    Matrix w = gram_matrix(d);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double dot = 0.0;
            for (int c = 0; c < 3; ++c) dot += d.points(i, c) * d.points(j, c);
            CHECK(w(i, j) == doctest::Approx(dot).epsilon(1e-14));
        }
    CHECK(w.isApprox(w.transpose()));
}

TEST_CASE("reduce merges must-link components transitively") {
    Dataset d = make_dataset({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}});
    ConstraintSet cons;
    cons.add_ml(0, 1);
    cons.add_ml(1, 2);
    auto rr = reduce(d, cons, 2);
    REQUIRE(!is_infeasible(rr));
    const ReducedInstance& red = std::get<ReducedInstance>(rr);
    CHECK(red.s() == 3);
    CHECK(red.components[0] == std::vector<int>{0, 1, 2});
    CHECK(red.sizes(0) == 3.0);
    CHECK(red.sizes(1) == 1.0);
    CHECK(red.sizes(2) == 1.0);
    CHECK(red.super_sum(0, 0) == 3.0);  // 0+1+2

    // selector really is the indicator matrix and e^s = T^s * ones
    Matrix t = red.selector();
    Vector ones = Vector::Ones(d.n());
    CHECK((t * ones).isApprox(red.sizes));
    CHECK(red.super_gram.isApprox(t * gram_matrix(d) * t.transpose(), 1e-12));
}

TEST_CASE("reduce reports a cannot-link trapped in a component") {
    Dataset d = make_dataset({{0.0}, {1.0}, {2.0}});
    ConstraintSet cons;
    cons.add_ml(0, 1);
    cons.add_cl(0, 1);
    auto rr = reduce(d, cons, 2);
    REQUIRE(is_infeasible(rr));
    const Infeasibility& inf = std::get<Infeasibility>(rr);
    CHECK(inf.kind == Infeasibility::Kind::ClWithinComponent);
    CHECK(inf.witness == IndexPair{0, 1});
}

TEST_CASE("reduce lifts cannot-links to component level") {
    Dataset d = make_dataset({{0.0}, {1.0}, {2.0}, {3.0}});
    ConstraintSet cons;
    cons.add_ml(0, 1);
    cons.add_ml(2, 3);
    cons.add_cl(1, 2);
    auto rr = reduce(d, cons, 2);
    REQUIRE(!is_infeasible(rr));
    const ReducedInstance& red = std::get<ReducedInstance>(rr);
    CHECK(red.s() == 2);
    CHECK(red.lifted_cl == std::vector<IndexPair>{{0, 1}});
}

TEST_CASE("reduce flags s < k") {
    Dataset d = make_dataset({{0.0}, {1.0}, {2.0}});
    ConstraintSet cons;
    cons.add_ml(0, 1);
    cons.add_ml(1, 2);
    auto rr = reduce(d, cons, 2);
    REQUIRE(is_infeasible(rr));
    CHECK(std::get<Infeasibility>(rr).kind == Infeasibility::Kind::TooFewSuperPoints);
}

TEST_CASE("k=2 inference adds the shared-neighbour pair") {
    ConstraintSet cons;
    cons.add_cl(0, 2);
    cons.add_cl(1, 2);
    ConstraintSet out = infer_ml_for_k2(cons, 2);
    CHECK(out.ml.count({0, 1}) == 1);
    CHECK(out.cl == cons.cl);

    // identity for k = 3
    ConstraintSet same = infer_ml_for_k2(cons, 3);
    CHECK(same.ml.empty());
}

TEST_CASE("k=2 inference runs to fixpoint") {
    // chain of cannot-links: 0-1, 1-2, 2-3
    ConstraintSet cons;
    cons.add_cl(0, 1);
    cons.add_cl(1, 2);
    cons.add_cl(2, 3);
    ConstraintSet out = infer_ml_for_k2(cons, 2);
    // worked by hand: 0~2 via neighbour 1, 1~3 via neighbour 2, then stable
    CHECK(out.ml.count({0, 2}) == 1);
    CHECK(out.ml.count({1, 3}) == 1);
    CHECK(out.ml.size() == 2);

    // the merged components are the two sides of the chain
    Dataset d = make_dataset({{0.0}, {1.0}, {2.0}, {3.0}});
    auto rr = reduce(d, out, 2);
    REQUIRE(!is_infeasible(rr));
    CHECK(std::get<ReducedInstance>(rr).s() == 2);
}

TEST_CASE("generated constraints agree with the labels") {
    GroundTruth truth{{0, 0, 1, 1}};
    ConstraintSet cons = generate_constraints(truth, 1, 0, 42);
    CHECK(cons.ml.size() == 1);
    CHECK(cons.cl.empty());
    auto [i, j] = *cons.ml.begin();
    CHECK(truth.labels[i] == truth.labels[j]);
}

TEST_CASE("generation fails when no valid pair exists") {
    GroundTruth truth{{0, 0, 0}};
    CHECK_THROWS_AS(generate_constraints(truth, 0, 1, 1), std::runtime_error);
}

TEST_CASE("two points with different labels can only make the one CL pair") {
    GroundTruth truth{{0, 1}};
    ConstraintSet cons = generate_constraints(truth, 0, 1, 7);
    CHECK(cons.cl == std::set<IndexPair>{{0, 1}});
}

TEST_CASE("generation is deterministic and label-consistent") {
    GroundTruth truth{{0, 0, 1, 1, 2, 2, 0, 1}};
    ConstraintSet a = generate_constraints(truth, 4, 4, 99);
    ConstraintSet b = generate_constraints(truth, 4, 4, 99);
    CHECK(a.ml == b.ml);
    CHECK(a.cl == b.cl);
    for (const auto& [i, j] : a.ml) CHECK(truth.labels[i] == truth.labels[j]);
    for (const auto& [i, j] : a.cl) CHECK(truth.labels[i] != truth.labels[j]);
}

TEST_CASE("geometric translation: diameter and split thresholds") {
    Dataset d = make_dataset({{0.0}, {1.0}, {10.0}});
    ConstraintSet via_diameter = translate_geometric(d, 5.0, std::nullopt);
    CHECK(via_diameter.cl == std::set<IndexPair>{{0, 2}, {1, 2}});
    CHECK(via_diameter.ml.empty());

    ConstraintSet via_split = translate_geometric(d, std::nullopt, 2.0);
    CHECK(via_split.ml == std::set<IndexPair>{{0, 1}});
    CHECK(via_split.cl.empty());

    ConstraintSet none = translate_geometric(d, std::nullopt, std::nullopt);
    CHECK(none.ml.empty());
    CHECK(none.cl.empty());
}

TEST_CASE("component-level reduction is idempotent") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testsup::random_instance(rng);
        auto rr = reduce(inst.data, inst.cons, inst.k);
        if (is_infeasible(rr)) continue;
        const ReducedInstance& red = std::get<ReducedInstance>(rr);

        // re-reduce the super points with the lifted constraints
        Dataset super;
        super.points = red.super_sum;
        ConstraintSet lifted;
        for (const auto& [a, b] : red.lifted_cl) lifted.add_cl(a, b);
        auto rr2 = reduce(super, lifted, inst.k);
        REQUIRE(!is_infeasible(rr2));
        const ReducedInstance& red2 = std::get<ReducedInstance>(rr2);
        CHECK(red2.s() == red.s());
        for (int i = 0; i < red2.s(); ++i) CHECK(red2.components[i] == std::vector<int>{i});
        CHECK(red2.lifted_cl == red.lifted_cl);
    }
}

TEST_CASE("reduced objective equals the original-space evaluation") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 40; ++trial) {
        auto inst = testsup::random_instance(rng);
        auto rr = reduce(inst.data, inst.cons, inst.k);
        if (is_infeasible(rr)) continue;
        const ReducedInstance& red = std::get<ReducedInstance>(rr);
        if (red.s() < inst.k) continue;

        std::vector<int> labels(red.s());
        std::uniform_int_distribution<int> pick(0, inst.k - 1);
        for (int i = 0; i < red.s(); ++i) labels[i] = pick(rng);
        for (int c = 0; c < inst.k; ++c) labels[c % red.s()] = c;
        if (!testsup::surjective(labels, inst.k)) continue;

        double via_reduced = red.assignment_objective(labels);
        double via_original =
            testsup::direct_objective(inst.data, red.expand_labels(labels), inst.k);
        CHECK(via_reduced == doctest::Approx(via_original).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("geometric thresholds must be positive") {
    Dataset d = make_dataset({{0.0}, {1.0}});
    CHECK_THROWS_AS(translate_geometric(d, -1.0, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(translate_geometric(d, std::nullopt, 0.0), std::invalid_argument);
}
