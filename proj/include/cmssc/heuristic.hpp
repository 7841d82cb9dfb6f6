#pragma once

#include <variant>

#include "cmssc/instance.hpp"

namespace cmssc {

// Feasible clustering of the super points with its exact centroids and
// the MSSC cost over the original points.
struct Assignment {
    std::vector<int> labels;  // over super points, all k labels used
    Matrix centroids;         // k x d
    double objective = 0.0;
};

using AssignmentResult = std::variant<Assignment, Infeasibility>;

struct HeuristicConfig {
    int max_iter = 100;
    long long assignment_node_cap = 10'000'000;
};

struct IpcTrace {
    int iterations = 0;
    std::vector<double> objectives;      // one entry per round
    bool assignment_proven_optimal = true;
};

// Clusters the rows of the relaxation matrix (weighted by e^s) and maps
// the groups back to centroids in the original coordinate space. Falls
// back to k-means++ seeding on the super points when the rows are too
// degenerate to carry k groups.
Matrix sdp_round_init(const Matrix& z, const ReducedInstance& reduced,
                      std::uint64_t seed);

// Exact assignment of super points to the given centers under lifted CL
// constraints and no-empty-cluster, by depth-first branch-and-bound with
// regret ordering. The returned Assignment carries the exact centroids of
// the chosen labels, not the input centers.
AssignmentResult constrained_assignment(const Matrix& centroids,
                                        const ReducedInstance& reduced,
                                        long long node_cap = 10'000'000,
                                        bool* proven_optimal = nullptr);

// Alternates the exact assignment step with exact centroid recomputation
// until the labels stabilize.
AssignmentResult ipc_kmeans(const ReducedInstance& reduced,
                            const Matrix& init_centroids,
                            const HeuristicConfig& cfg,
                            IpcTrace* trace = nullptr);

}  // namespace cmssc
