#include "cmssc/safe_bound.hpp"

#include <cmath>

#include "cmssc/kernels.hpp"

namespace cmssc {

double eig_perturbation_bound(const Matrix& s_tilde, double z_bar) {
    if (z_bar < 0) throw std::invalid_argument("z_bar must be nonnegative");
    if (!s_tilde.allFinite()) throw NumericalBreakdown("non-finite dual slack matrix");
    Vector evals = kernels::sym_eigenvalues(s_tilde);
    // conservative rounding slack: each computed eigenvalue is shifted
    // down before the sign test so roundoff cannot hide a negative one
    const double slack = 1e-10 * s_tilde.norm();
    double sum_neg = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        double lam = evals(i) - slack;
        if (lam < 0.0) sum_neg += lam;
    }
    return z_bar * sum_neg;
}

DualCertificate safe_lower_bound(const SdpModel& model, const SdpSolution& sol) {
    const int s = model.s();
    DualCertificate cert;
    cert.z_bar = 1.0;

    // any non-finite dual collapses to zero: the certificate stays valid,
    // it just gets weaker
    cert.y = Vector::Zero(s + 1);
    if (sol.y.size() == s + 1 && sol.y.allFinite()) cert.y = sol.y;

    cert.v_tilde = Matrix::Zero(s, s);
    if (sol.v_dual.rows() == s && sol.v_dual.allFinite())
        cert.v_tilde = 0.5 * (sol.v_dual + sol.v_dual.transpose());

    // nonnegativity duals must be nonnegative except on the pinned
    // cannot-link entries, where the multiplier is free
    std::vector<char> free_entry(static_cast<size_t>(s) * s, 0);
    for (const auto& [i, j] : model.zero_entries) {
        free_entry[static_cast<size_t>(i) * s + j] = 1;
        free_entry[static_cast<size_t>(j) * s + i] = 1;
    }
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (!free_entry[static_cast<size_t>(i) * s + j] && cert.v_tilde(i, j) < 0.0) {
                cert.v_tilde(i, j) = 0.0;
                ++cert.clamped_v;
            }

    cert.mu = Vector(static_cast<int>(model.zero_entries.size()));
    for (size_t t = 0; t < model.zero_entries.size(); ++t)
        cert.mu(static_cast<int>(t)) =
            2.0 * cert.v_tilde(model.zero_entries[t].first, model.zero_entries[t].second);

    // cut multipliers in the >= sense; wrong signs are zeroed, equality
    // cuts keep theirs
    const int n_cuts = static_cast<int>(model.cuts.size());
    cert.cut_duals = Vector::Zero(n_cuts);
    for (int r = 0; r < n_cuts; ++r) {
        double w = (sol.cut_duals.size() == n_cuts && std::isfinite(sol.cut_duals(r)))
                       ? sol.cut_duals(r)
                       : 0.0;
        if (model.cuts[r].sense != CutSense::EQ && w < 0.0) {
            w = 0.0;
            ++cert.clamped_cuts;
        }
        cert.cut_duals(r) = w;
    }

    // dual slack assembled from scratch with the corrected multipliers
    Matrix s_tilde = -model.objective;
    const Vector& e = model.row_weights;
    s_tilde -= 0.5 * (cert.y.head(s) * e.transpose() + e * cert.y.head(s).transpose());
    s_tilde.diagonal() -= cert.y(s) * e;
    double cut_rhs_term = 0.0;
    for (int r = 0; r < n_cuts; ++r) {
        const CutRow& cut = model.cuts[r];
        const double flip = cut.sense == CutSense::LE ? -1.0 : 1.0;
        const double w = cert.cut_duals(r);
        if (w != 0.0) {
            for (const auto& [i, j, c] : cut.entries) {
                double coeff = flip * c * w;
                if (i == j) {
                    s_tilde(i, i) -= coeff;
                } else {
                    s_tilde(i, j) -= 0.5 * coeff;
                    s_tilde(j, i) -= 0.5 * coeff;
                }
            }
            cut_rhs_term += w * flip * cut.rhs;
        }
    }
    s_tilde -= cert.v_tilde;

    cert.s_tilde = 0.5 * (s_tilde + s_tilde.transpose());
    if (!cert.s_tilde.allFinite()) throw NumericalBreakdown("non-finite dual slack matrix");
    Vector evals = kernels::sym_eigenvalues(cert.s_tilde);
    cert.s_tilde_min_eig = evals(0);
    const double slack = 1e-10 * cert.s_tilde.norm();
    double perturbation = 0.0;
    for (int i = 0; i < evals.size(); ++i) {
        double lam = evals(i) - slack;
        if (lam < 0.0) perturbation += lam;
    }
    perturbation *= cert.z_bar;
    cert.safe_lb = model.constant + cert.y.head(s).sum() +
                   static_cast<double>(model.k) * cert.y(s) + cut_rhs_term + perturbation;
    return cert;
}

}  // namespace cmssc
