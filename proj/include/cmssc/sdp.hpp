#pragma once

#include <tuple>

#include "cmssc/instance.hpp"

namespace cmssc {

enum class CutSense { LE, GE, EQ };

// Sparse symmetric coefficient row. The left-hand side evaluates as
//   sum over stored entries (i <= j) of  v * Z_ij,
// using the symmetry of Z (each off-diagonal entry is counted once).
struct CutRow {
    std::vector<std::tuple<int, int, double>> entries;
    CutSense sense = CutSense::GE;
    double rhs = 0.0;

    double lhs(const Matrix& z) const;
};

// Data of the reduced SDP relaxation plus active cutting planes.
// The relaxation maximizes <objective, Z> subject to
//   Z e^s = e,  <Diag(e^s), Z> = k,  Z_ij = 0 on zero_entries,
//   Z >= 0 entrywise, Z PSD, and every cut row.
// `constant` holds <I, W> so that reported objectives are full MSSC costs.
struct SdpModel {
    Matrix objective;               // s x s, the super-point Gram matrix
    Vector row_weights;             // e^s
    int k = 0;
    double constant = 0.0;          // <I, W>
    std::vector<IndexPair> zero_entries;  // i < j
    std::vector<CutRow> cuts;

    int s() const { return static_cast<int>(objective.rows()); }
};

struct SdpSolverConfig {
    double tol = 1e-5;       // relative KKT residual
    int max_iter = 100000;
    double rho = 0.0;        // initial penalty, 0 = pick from data
    int check_every = 20;
    double step = 1.0;       // multiplier step length
};

struct SdpWarmStart {
    Matrix z;          // primal iterate
    Matrix v;          // dual of Z >= 0
    Vector y;          // duals of row sums + trace
    Vector cut_duals;  // per cut, may be shorter than the model's cut list
};

struct SdpSolution {
    Matrix z;            // symmetric primal matrix
    Vector y;            // length s+1: row-sum duals then trace dual
    Vector mu;           // per zero entry, free sign
    Vector cut_duals;    // per cut; >= 0 expected for LE and GE cuts
    Matrix v_dual;       // dual of Z >= 0, nonnegative off the zero entries
    double primal_obj = 0.0;   // constant - <objective, z>
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

SdpModel build_model(const ReducedInstance& reduced,
                     const std::vector<CutRow>& cuts = {});

// First-order splitting solver: alternates a linear dual update, a
// projection onto the PSD cone and a projection onto the polyhedral cone
// (nonnegative orthant with the cannot-link entries pinned to zero).
// Always returns whatever duals it has; they feed the safe bound even
// when the run stops at max_iter.
SdpSolution solve(const SdpModel& model, const SdpSolverConfig& cfg,
                  const SdpWarmStart* warm = nullptr);

}  // namespace cmssc
