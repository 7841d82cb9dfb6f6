#pragma once

#include "cmssc/safe_bound.hpp"
#include "cmssc/sdp.hpp"

namespace cmssc {

enum class CutKind { Pair, Triangle, Clique };

// Pair (i,j):        Z_ij <= Z_ii          (i is the diagonal index)
// Triangle (i,j,h):  Z_ij + Z_ih <= Z_ii + Z_jh
// Clique Q:          sum_{a<b in Q} Z_ab >= 1 / (n_effective - k + 1)
struct Cut {
    CutKind kind = CutKind::Pair;
    std::vector<int> indices;
    double violation = 0.0;

    bool same_support(const Cut& other) const;
};

struct CutPool {
    std::vector<Cut> active;
    std::vector<Cut> inherited;
    double violation_tol = 1e-4;
    int batch_cap = 100000;
    double keep_fraction = 0.05;
};

// Separators are deterministic for a fixed seed. When the budget covers
// the whole candidate space they scan it exhaustively.
std::vector<Cut> separate_pair(const Matrix& z, double tol, int budget,
                               std::uint64_t seed);
std::vector<Cut> separate_triangle(const Matrix& z, double tol, int budget,
                                   std::uint64_t seed);
// Greedy growth around each seed vertex; emits at most s cuts, every one
// of them genuinely violated. n_effective must be a valid point count for
// the clique right-hand side (the original n of the instance is sound).
std::vector<Cut> separate_clique(const Matrix& z, int k, int n_effective,
                                 double tol);

CutRow cut_to_row(const Cut& cut, int k, int n_effective);

struct CpConfig {
    int max_rounds = 50;
    double stall_tol = 1e-5;
    double activity_tol = 1e-5;
    double gap_tol = 1e-4;
    std::uint64_t seed = 0;
    int n_effective = 0;  // point count entering the clique RHS
};

struct CpRoundLog {
    int round = 0;
    int added_pair = 0;
    int added_triangle = 0;
    int added_clique = 0;
    int purged = 0;
    int cuts_in_model = 0;
    double safe_lb = 0.0;
};

struct CpResult {
    SdpSolution solution;        // last solved relaxation
    DualCertificate certificate; // best safe bound seen across rounds
    CutPool pool;                // active == cuts of the last solved model
    int rounds = 0;
    std::vector<CpRoundLog> log;
};

// solve -> safe bound -> separate -> purge -> re-solve, until no violated
// cuts, a stalled bound, a bound good enough to prune, or max_rounds.
// `warm0` seeds the first solve; later rounds reuse their own iterates.
CpResult cutting_plane_loop(const ReducedInstance& reduced, CutPool pool,
                            const SdpSolverConfig& solver_cfg,
                            const CpConfig& cfg, double upper_bound,
                            const SdpWarmStart* warm0 = nullptr);

}  // namespace cmssc
