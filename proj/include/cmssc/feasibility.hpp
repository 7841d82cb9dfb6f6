#pragma once

#include <optional>

#include "cmssc/instance.hpp"

namespace cmssc {

struct FeasibilityResult {
    std::optional<std::vector<int>> assignment;  // over super points

    bool feasible() const { return assignment.has_value(); }
};

// Exact decision: does any surjective k-clustering of the super points
// respect every lifted cannot-link pair? Backtracking k-coloring with
// DSATUR ordering and canonical color symmetry breaking; a donation pass
// afterwards makes the witness use all k labels.
FeasibilityResult check_feasible(int s, int k,
                                 const std::vector<IndexPair>& cl);
FeasibilityResult check_feasible(const ReducedInstance& reduced);

}  // namespace cmssc
