#pragma once

#include <optional>

#include "cmssc/cuts.hpp"
#include "cmssc/heuristic.hpp"

namespace cmssc {

struct BnbConfig {
    double gap_tol = 1e-4;
    int max_nodes = 200;
    int workers = 0;  // 0 = min(hardware threads, 16)
    std::uint64_t seed = 0;
    SdpSolverConfig sdp;
    int root_max_rounds = 50;
    int child_max_rounds = 30;
    double stall_tol = 1e-5;
    double activity_tol = 1e-5;
    double violation_tol = 1e-4;
    int batch_cap = 100000;
    double keep_fraction = 0.05;
    double integrality_tol = 1e-4;
    HeuristicConfig heuristic;
    bool warm_start = true;
};

// Branching decisions accumulated on the path from the root, over
// original point indices.
struct Node {
    std::vector<IndexPair> extra_ml;
    std::vector<IndexPair> extra_cl;
    double parent_lb = -std::numeric_limits<double>::infinity();
    int depth = 0;
    long long id = 0;
};

enum class SolveStatus { Optimal, NodeLimit, Infeasible };

struct RootStats {
    int cp_rounds = 0;   // cutting-plane iterations at the root
    int inequalities = 0;  // cuts in the last SDP solved at the root
    double gap = 0.0;
    double time_sec = 0.0;
};

struct NodeLogRow {
    long long id = 0;
    long long parent = -1;
    int depth = 0;
    int size = 0;    // super points at the node
    int rounds = 0;
    int cuts = 0;
    double safe_lb = 0.0;
    double ub = 0.0;
    double gap = 0.0;
    double time_sec = 0.0;
    // certificate summary of the bounding pass
    double cert_min_eig = 0.0;
    int cert_clamped = 0;
    std::string action;  // pruned | branched | integral | infeasible
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<std::vector<int>> best_labels;  // over original points
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;
    int nodes_explored = 0;
    RootStats root;
    double wall_time_sec = 0.0;
    std::vector<NodeLogRow> node_log;
};

// argmax over i<j of min(Z_ij, ||Z_i. - Z_j.||^2); nullopt when the best
// score is at most `integrality_tol` (the relaxation is integral enough).
std::optional<IndexPair> select_branching_pair(const Matrix& z,
                                               double integrality_tol = 1e-4);

SolveResult solve(const Dataset& data, const ConstraintSet& cons, int k,
                  const BnbConfig& cfg);

}  // namespace cmssc
