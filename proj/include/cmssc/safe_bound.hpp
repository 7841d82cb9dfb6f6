#pragma once

#include "cmssc/sdp.hpp"

namespace cmssc {

// Rigorous lower bound built from (possibly inexact) dual variables.
// safe_lb is valid for the constrained MSSC optimum of the node no matter
// how precise the solver run was.
struct DualCertificate {
    Vector y;             // s+1
    Vector mu;            // values lodged at the zero entries, free sign
    Vector cut_duals;     // sign-corrected multipliers
    Matrix v_tilde;       // nonnegative off the zero entries
    Matrix s_tilde;       // dual slack matrix
    double z_bar = 1.0;
    double s_tilde_min_eig = 0.0;
    double safe_lb = 0.0;
    int clamped_v = 0;
    int clamped_cuts = 0;
};

// z_bar * (sum of negative eigenvalues of s_tilde), with every computed
// eigenvalue shifted down by a conservative rounding slack before the
// sign test.
double eig_perturbation_bound(const Matrix& s_tilde, double z_bar);

DualCertificate safe_lower_bound(const SdpModel& model, const SdpSolution& sol);

}  // namespace cmssc
