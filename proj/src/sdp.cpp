#include "cmssc/sdp.hpp"

#include <cmath>
#include <map>

#include "cmssc/kernels.hpp"

namespace cmssc {

double CutRow::lhs(const Matrix& z) const {
    double v = 0.0;
    for (const auto& [i, j, c] : entries) v += c * z(i, j);
    return v;
}

SdpModel build_model(const ReducedInstance& reduced, const std::vector<CutRow>& cuts) {
    SdpModel m;
    m.objective = reduced.super_gram;
    m.row_weights = reduced.sizes;
    m.k = reduced.k;
    m.constant = reduced.trace_w;
    m.zero_entries = reduced.lifted_cl;
    m.cuts = cuts;
    return m;
}

namespace {

// Cut rows are handled internally in >= form so every inequality
// multiplier is expected nonnegative. LE cuts are negated on the way in;
// the multiplier value is unchanged by the flip.
struct CanonRow {
    std::vector<std::tuple<int, int, double>> entries;  // i <= j
    double rhs = 0.0;
    bool inequality = true;
    int slack = -1;  // index into the slack vector, -1 for equalities
};

struct Operator {
    int s = 0;
    int q = 0;       // total rows: s row sums + 1 trace + cuts
    int n_slack = 0; // number of inequality cut rows
    Vector e;        // row weights e^s
    std::vector<CanonRow> cut_rows;
    std::vector<std::pair<int, int>> zero_entries;

    // r = [Z e^s ; <Diag(e^s), Z> ; cut rows minus slack]
    Vector apply(const Matrix& z, const Vector& xi) const {
        Vector r(q);
        r.head(s) = z * e;
        r(s) = z.diagonal().dot(e);
        for (size_t t = 0; t < cut_rows.size(); ++t) {
            const CanonRow& row = cut_rows[t];
            double v = 0.0;
            for (const auto& [i, j, c] : row.entries) v += c * z(i, j);
            if (row.slack >= 0) v -= xi(row.slack);
            r(s + 1 + static_cast<int>(t)) = v;
        }
        return r;
    }

    // matrix part of the adjoint; the slack part is -u at inequality rows
    Matrix adjoint(const Vector& u) const {
        Matrix a = 0.5 * (u.head(s) * e.transpose() + e * u.head(s).transpose());
        a.diagonal() += u(s) * e;
        for (size_t t = 0; t < cut_rows.size(); ++t) {
            double w = u(s + 1 + static_cast<int>(t));
            if (w == 0.0) continue;
            for (const auto& [i, j, c] : cut_rows[t].entries) {
                if (i == j) {
                    a(i, i) += w * c;
                } else {
                    a(i, j) += 0.5 * w * c;
                    a(j, i) += 0.5 * w * c;
                }
            }
        }
        return a;
    }

    Vector slack_part(const Vector& u) const {
        Vector w = Vector::Zero(n_slack);
        for (size_t t = 0; t < cut_rows.size(); ++t)
            if (cut_rows[t].slack >= 0) w(cut_rows[t].slack) = u(s + 1 + static_cast<int>(t));
        return w;
    }

    // Gram matrix of the adjoint rows, slack identity included.
    Matrix gram() const {
        Matrix g = Matrix::Zero(q, q);
        const double ee = e.squaredNorm();
        for (int i = 0; i < s; ++i) {
            for (int j = i; j < s; ++j) {
                double v = 0.5 * ((i == j ? ee : 0.0) + e(i) * e(j));
                g(i, j) = v;
                g(j, i) = v;
            }
            g(i, s) = e(i) * e(i);
            g(s, i) = g(i, s);
        }
        g(s, s) = ee;

        // cut x base blocks
        for (size_t t = 0; t < cut_rows.size(); ++t) {
            const int r = s + 1 + static_cast<int>(t);
            for (const auto& [i, j, c] : cut_rows[t].entries) {
                if (i == j) {
                    // diagonal entry: meets E_a^s at a == i and the trace row
                    g(r, i) += c * e(i);
                    g(i, r) += c * e(i);
                    g(r, s) += c * e(i);
                    g(s, r) += c * e(i);
                } else {
                    // off-diagonal entry (i < j)
                    g(r, i) += 0.5 * c * e(j);
                    g(i, r) += 0.5 * c * e(j);
                    g(r, j) += 0.5 * c * e(i);
                    g(j, r) += 0.5 * c * e(i);
                }
            }
            if (cut_rows[t].slack >= 0) g(r, r) += 1.0;
        }

        // cut x cut via shared matrix entries
        std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> by_entry;
        for (size_t t = 0; t < cut_rows.size(); ++t)
            for (const auto& [i, j, c] : cut_rows[t].entries)
                by_entry[{i, j}].emplace_back(s + 1 + static_cast<int>(t), c);
        for (const auto& [entry, rows] : by_entry) {
            const double weight = entry.first == entry.second ? 1.0 : 0.5;
            for (size_t a = 0; a < rows.size(); ++a)
                for (size_t b = a; b < rows.size(); ++b) {
                    double v = weight * rows[a].second * rows[b].second;
                    g(rows[a].first, rows[b].first) += v;
                    if (rows[a].first != rows[b].first) g(rows[b].first, rows[a].first) += v;
                }
        }
        return g;
    }
};

Operator make_operator(const SdpModel& model) {
    Operator op;
    op.s = model.s();
    op.e = model.row_weights;
    op.zero_entries.assign(model.zero_entries.begin(), model.zero_entries.end());
    int slack = 0;
    for (const CutRow& cut : model.cuts) {
        CanonRow row;
        row.rhs = cut.rhs;
        row.entries = cut.entries;
        if (cut.sense == CutSense::LE) {
            for (auto& [i, j, c] : row.entries) c = -c;
            row.rhs = -cut.rhs;
        }
        row.inequality = cut.sense != CutSense::EQ;
        if (row.inequality) row.slack = slack++;
        op.cut_rows.push_back(std::move(row));
    }
    op.n_slack = slack;
    op.q = op.s + 1 + static_cast<int>(op.cut_rows.size());
    return op;
}

void require_finite_or_throw(const Matrix& m) {
    if (!m.allFinite()) throw NumericalBreakdown("solver iterate became non-finite");
}

}  // namespace

SdpSolution solve(const SdpModel& model, const SdpSolverConfig& cfg,
                  const SdpWarmStart* warm) {
    if (cfg.tol <= 0) throw std::invalid_argument("solver tolerance must be positive");
    const int s = model.s();
    if (s < 1) throw std::invalid_argument("empty model");

    Operator op = make_operator(model);
    const int q = op.q;

    Vector b(q);
    b.head(s).setOnes();
    b(s) = static_cast<double>(model.k);
    for (size_t t = 0; t < op.cut_rows.size(); ++t)
        b(s + 1 + static_cast<int>(t)) = op.cut_rows[t].rhs;

    // normalize the data to unit scale in both directions so the penalty
    // schedule and the stopping test are problem-independent
    const double obj_norm = model.objective.norm();
    const double sigma_c = obj_norm > 0.0 ? obj_norm : 1.0;
    const double sigma_b = std::max(1.0, b.norm());

    Matrix c_scaled = -model.objective / sigma_c;
    Vector b_scaled = b / sigma_b;

    // entries pinned to zero by lifted cannot-links
    std::vector<char> on_zero(static_cast<size_t>(s) * s, 0);
    for (const auto& [i, j] : op.zero_entries) {
        on_zero[static_cast<size_t>(i) * s + j] = 1;
        on_zero[static_cast<size_t>(j) * s + i] = 1;
    }

    Matrix gram = op.gram();
    const double ridge = 1e-10 * (gram.trace() / q + 1.0);
    gram.diagonal().array() += ridge;
    Eigen::LDLT<Matrix> chol(gram);
    if (chol.info() != Eigen::Success)
        throw NumericalBreakdown("factorization of the constraint Gram matrix failed");

    Matrix x = Matrix::Zero(s, s);
    Vector xi = Vector::Zero(op.n_slack);
    Matrix sdual = Matrix::Zero(s, s);
    Matrix v = Matrix::Zero(s, s);
    Vector sigma = Vector::Zero(op.n_slack);
    Vector u = Vector::Zero(q);

    if (warm) {
        if (warm->z.rows() == s) {
            x = (warm->z + warm->z.transpose()) / (2.0 * sigma_b);
        }
        if (warm->v.rows() == s) v = (warm->v + warm->v.transpose()) / (2.0 * sigma_c);
        if (warm->y.size() == s + 1) u.head(s + 1) = warm->y / sigma_c;
        if (warm->cut_duals.size() > 0) {
            int copy = std::min<int>(static_cast<int>(warm->cut_duals.size()),
                                     static_cast<int>(op.cut_rows.size()));
            for (int t = 0; t < copy; ++t) u(s + 1 + t) = warm->cut_duals(t) / sigma_c;
        }
        for (size_t t = 0; t < op.cut_rows.size(); ++t)
            if (op.cut_rows[t].slack >= 0) {
                double lhs = 0.0;
                for (const auto& [i, j, c] : op.cut_rows[t].entries) lhs += c * x(i, j);
                xi(op.cut_rows[t].slack) = std::max(0.0, lhs - b_scaled(s + 1 + static_cast<int>(t)));
            }
        sdual = kernels::psd_project(c_scaled - op.adjoint(u) - v);
    }

    double rho = cfg.rho > 0 ? cfg.rho : 1.0;
    const double gamma = cfg.step;
    const double b_scaled_norm = b_scaled.norm();
    const double c_scaled_norm = c_scaled.norm();

    SdpSolution best;
    double best_kkt = std::numeric_limits<double>::infinity();

    auto snapshot = [&](double kkt, int iter, bool converged) {
        SdpSolution out;
        out.z = sigma_b * 0.5 * (x + x.transpose());
        out.y = sigma_c * u.head(s + 1);
        out.cut_duals = sigma_c * u.tail(q - s - 1);
        out.v_dual = sigma_c * v;
        out.mu = Vector(static_cast<int>(op.zero_entries.size()));
        for (size_t t = 0; t < op.zero_entries.size(); ++t)
            out.mu(static_cast<int>(t)) = 2.0 * out.v_dual(op.zero_entries[t].first,
                                                           op.zero_entries[t].second);
        out.primal_obj = model.constant - (model.objective.array() * out.z.array()).sum();
        out.kkt_residual = kkt;
        out.iterations = iter;
        out.converged = converged;
        return out;
    };

    int iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
        // dual ascent block: linear solve for the equality/cut multipliers
        Vector rhs = b_scaled / rho - op.apply(x, xi) / rho -
                     op.apply(sdual + v - c_scaled, sigma);
        u = chol.solve(rhs);

        Matrix adj = op.adjoint(u);
        Vector u_slack = op.slack_part(u);

        // PSD block
        Matrix gmat = c_scaled - adj - v - x / rho;
        sdual = kernels::psd_project(gmat);

        // polyhedral block: nonnegative orthant, cannot-link entries free
        Matrix h = c_scaled - adj - sdual - x / rho;
        v = h.cwiseMax(0.0);
        for (const auto& [i, j] : op.zero_entries) {
            v(i, j) = h(i, j);
            v(j, i) = h(j, i);
        }
        sigma = (u_slack - xi / rho).cwiseMax(0.0);

        // multiplier step
        Matrix r_mat = adj + sdual + v - c_scaled;
        Vector r_slack = sigma - u_slack;
        x += gamma * rho * r_mat;
        xi += gamma * rho * r_slack;

        if ((iter + 1) % cfg.check_every != 0 && iter + 1 < cfg.max_iter) continue;

        require_finite_or_throw(x);
        require_finite_or_throw(v);

        // feasibility residuals of the unit-scaled problem (scale-invariant);
        // the objective gap is measured in original units so it stays tight
        // when the optimum is small against the data norms
        double pinf = (op.apply(x, xi) - b_scaled).norm() / (1.0 + b_scaled_norm);
        double dinf = std::sqrt(r_mat.squaredNorm() + r_slack.squaredNorm()) /
                      (1.0 + c_scaled_norm);
        double pobj = sigma_c * sigma_b * (c_scaled.array() * x.array()).sum();
        double dobj = sigma_c * sigma_b * b_scaled.dot(u);
        double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        double kkt = std::max({pinf, dinf, gap});

        if (kkt <= cfg.tol || iter + 1 >= cfg.max_iter || kkt < best_kkt) {
            // primal cone violation, checked only when it can matter
            Vector evals = kernels::sym_eigenvalues(0.5 * (x + x.transpose()));
            double neg_eig = std::max(0.0, -evals(0));
            double neg_entries = 0.0;
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    if (!on_zero[static_cast<size_t>(i) * s + j])
                        neg_entries += std::min(0.0, x(i, j)) * std::min(0.0, x(i, j));
            double cone = (neg_eig + std::sqrt(neg_entries)) / (1.0 + x.norm());
            kkt = std::max(kkt, cone);
        }

        if (kkt < best_kkt) {
            best_kkt = kkt;
            best = snapshot(kkt, iter + 1, kkt <= cfg.tol);
        }
        if (kkt <= cfg.tol) break;

        // residual balancing keeps the two residuals within a decade
        if ((iter + 1) % 100 == 0) {
            if (dinf > 10.0 * pinf)
                rho = std::min(rho * 1.6, 1e6);
            else if (pinf > 10.0 * dinf)
                rho = std::max(rho / 1.6, 1e-6);
        }
    }

    if (!std::isfinite(best_kkt)) return snapshot(std::numeric_limits<double>::infinity(), iter, false);
    return best;
}

}  // namespace cmssc
