#pragma once

#include "cmssc/types.hpp"

namespace cmssc {

struct ContingencyTable {
    Eigen::MatrixXi counts;     // r x c
    std::vector<int> row_sums;  // a_i
    std::vector<int> col_sums;  // b_j
    int n = 0;
};

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& labels);

// Exact within-cluster sum of squared distances to the centroids.
// When k >= 0 every cluster in [0, k) must be nonempty.
double mssc_objective(const Dataset& data, const std::vector<int>& labels,
                      int k = -1);

double ari(const std::vector<int>& truth, const std::vector<int>& labels);
double ami(const std::vector<int>& truth, const std::vector<int>& labels);

double relative_gap(double ub, double lb);

}  // namespace cmssc
