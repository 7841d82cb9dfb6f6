#pragma once

#include <variant>

#include "cmssc/instance.hpp"

namespace cmssc {

struct OracleResult {
    double objective = 0.0;
    std::vector<int> labels;  // over original points
};

using OracleOutcome = std::variant<OracleResult, Infeasibility>;

// Reference solver: enumerates every surjective assignment of super
// points to k clusters (canonical labelings only) respecting the lifted
// cannot-link pairs, and returns the cheapest. Guarded: throws TooLarge
// when k^s exceeds 1e7 after reduction.
OracleOutcome brute_force_solve(const Dataset& data, const ConstraintSet& cons,
                                int k);

}  // namespace cmssc
