#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "cmssc/types.hpp"

namespace cmssc {

// Clustering problem after collapsing every must-link component into a
// single super point. Component order is canonical: sorted by the smallest
// original index they contain.
struct ReducedInstance {
    std::vector<std::vector<int>> components;  // B_i, each sorted ascending
    std::vector<int> comp_of;                  // original index -> component
    Vector sizes;                              // e^s, component cardinalities
    Matrix super_sum;                          // s x d, row i = sum of points in B_i
    Matrix super_gram;                         // s x s
    std::vector<IndexPair> lifted_cl;          // over component indices, i < j
    int k = 0;
    double trace_w = 0.0;

    int s() const { return static_cast<int>(components.size()); }
    int n() const { return static_cast<int>(comp_of.size()); }
    int d() const { return static_cast<int>(super_sum.cols()); }

    Matrix selector() const;  // T^s as a dense 0/1 matrix, s x n
    bool cl_forbids(int a, int b) const;
    Matrix component_means() const;  // s x d, row i = super_sum_i / sizes_i

    // MSSC objective over the original points for an assignment of super
    // points to clusters (labels in [0, k), unused labels allowed).
    double assignment_objective(const std::vector<int>& labels) const;
    // Exact centroids of the clusters induced by `labels`; rows of unused
    // clusters are left zero.
    Matrix assignment_centroids(const std::vector<int>& labels) const;
    std::vector<int> expand_labels(const std::vector<int>& labels) const;
};

using ReduceResult = std::variant<ReducedInstance, Infeasibility>;

inline bool is_infeasible(const ReduceResult& r) {
    return std::holds_alternative<Infeasibility>(r);
}

Matrix gram_matrix(const Dataset& data);

ReduceResult reduce(const Dataset& data, const ConstraintSet& cons, int k);

// For k = 2, two points sharing a cannot-link neighbour must be linked.
// Applied to fixpoint; identity for k != 2.
ConstraintSet infer_ml_for_k2(const ConstraintSet& cons, int k);

// Random pairs become ML or CL according to the true labels until the
// targets are met. Throws std::runtime_error when the targets cannot be
// reached within the draw budget.
ConstraintSet generate_constraints(const GroundTruth& truth, int target_ml,
                                   int target_cl, std::uint64_t seed);

// Diameter bound -> CL for pairs farther apart; split bound -> ML for
// pairs closer together.
ConstraintSet translate_geometric(const Dataset& data,
                                  std::optional<double> diameter,
                                  std::optional<double> split);

}  // namespace cmssc
