#include "cmssc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cmssc {

namespace {

// remap arbitrary label values to 0..r-1 in order of first appearance
std::vector<int> compress(const std::vector<int>& labels, int& count) {
    std::map<int, int> ids;
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
        out[i] = it->second;
    }
    count = static_cast<int>(ids.size());
    return out;
}

double comb2(long long m) {
    return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
}

// true when the two partitions induce identical groupings
bool identical_partitions(const ContingencyTable& t) {
    for (int i = 0; i < t.counts.rows(); ++i) {
        int nonzero = 0;
        for (int j = 0; j < t.counts.cols(); ++j)
            if (t.counts(i, j) > 0) ++nonzero;
        if (nonzero != 1) return false;
    }
    for (int j = 0; j < t.counts.cols(); ++j) {
        int nonzero = 0;
        for (int i = 0; i < t.counts.rows(); ++i)
            if (t.counts(i, j) > 0) ++nonzero;
        if (nonzero != 1) return false;
    }
    return true;
}

}  // namespace

ContingencyTable contingency(const std::vector<int>& truth,
                             const std::vector<int>& labels) {
    if (truth.size() != labels.size())
        throw std::invalid_argument("partitions have different lengths");
    int r = 0, c = 0;
    std::vector<int> u = compress(truth, r);
    std::vector<int> v = compress(labels, c);
    ContingencyTable t;
    t.n = static_cast<int>(truth.size());
    t.counts = Eigen::MatrixXi::Zero(r, c);
    for (size_t i = 0; i < u.size(); ++i) t.counts(u[i], v[i]) += 1;
    t.row_sums.assign(r, 0);
    t.col_sums.assign(c, 0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            t.row_sums[i] += t.counts(i, j);
            t.col_sums[j] += t.counts(i, j);
        }
    return t;
}

double mssc_objective(const Dataset& data, const std::vector<int>& labels, int k) {
    data.validate();
    if (static_cast<int>(labels.size()) != data.n())
        throw std::invalid_argument("labels length differs from dataset size");
    for (int v : labels)
        if (v < 0) throw std::invalid_argument("negative cluster label");

    std::vector<int> ids = labels;
    if (k < 0) {
        // no target count given: only the used clusters matter
        int used = 0;
        ids = compress(labels, used);
        k = used;
    } else {
        for (int v : labels)
            if (v >= k) throw std::invalid_argument("label outside [0, k)");
    }

    Matrix sums = Matrix::Zero(k, data.d());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < data.n(); ++i) {
        sums.row(ids[i]) += data.points.row(i);
        counts[ids[i]] += 1;
    }
    for (int j = 0; j < k; ++j)
        if (counts[j] == 0) throw EmptyCluster("cluster " + std::to_string(j) + " is empty");

    double obj = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        Eigen::RowVectorXd centroid = sums.row(ids[i]) / counts[ids[i]];
        obj += (data.points.row(i) - centroid).squaredNorm();
    }
    return obj;
}

double ari(const std::vector<int>& truth, const std::vector<int>& labels) {
    ContingencyTable t = contingency(truth, labels);
    double sum_cells = 0.0;
    for (int i = 0; i < t.counts.rows(); ++i)
        for (int j = 0; j < t.counts.cols(); ++j) sum_cells += comb2(t.counts(i, j));
    double sum_a = 0.0, sum_b = 0.0;
    for (int a : t.row_sums) sum_a += comb2(a);
    for (int b : t.col_sums) sum_b += comb2(b);
    double total = comb2(t.n);

    double expected = (total > 0) ? sum_a * sum_b / total : 0.0;
    double maximum = 0.5 * (sum_a + sum_b);
    double denom = maximum - expected;
    if (denom == 0.0) return 1.0;  // both partitions trivial
    return (sum_cells - expected) / denom;
}

double ami(const std::vector<int>& truth, const std::vector<int>& labels) {
    ContingencyTable t = contingency(truth, labels);
    const int n = t.n;
    const int r = static_cast<int>(t.counts.rows());
    const int c = static_cast<int>(t.counts.cols());

    // log-factorial table by accumulation, exact enough at desk scale
    std::vector<double> logfact(n + 1, 0.0);
    for (int i = 2; i <= n; ++i) logfact[i] = logfact[i - 1] + std::log(static_cast<double>(i));

    double mi = 0.0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            int cij = t.counts(i, j);
            if (cij == 0) continue;
            mi += (static_cast<double>(cij) / n) *
                  std::log(static_cast<double>(n) * cij /
                           (static_cast<double>(t.row_sums[i]) * t.col_sums[j]));
        }

    double hu = 0.0, hv = 0.0;
    for (int a : t.row_sums)
        if (a > 0) hu -= (static_cast<double>(a) / n) * std::log(static_cast<double>(a) / n);
    for (int b : t.col_sums)
        if (b > 0) hv -= (static_cast<double>(b) / n) * std::log(static_cast<double>(b) / n);

    // exact expected mutual information under the hypergeometric model;
    // the inner sum runs over all attainable cell values, not the observed one
    double emi = 0.0;
    for (int i = 0; i < r; ++i) {
        const int a = t.row_sums[i];
        for (int j = 0; j < c; ++j) {
            const int b = t.col_sums[j];
            const int lo = std::max(1, a + b - n);
            const int hi = std::min(a, b);
            for (int nij = lo; nij <= hi; ++nij) {
                double term = (static_cast<double>(nij) / n) *
                              std::log(static_cast<double>(n) * nij /
                                       (static_cast<double>(a) * b));
                double logweight = logfact[a] + logfact[b] + logfact[n - a] + logfact[n - b] -
                                   logfact[n] - logfact[nij] - logfact[a - nij] -
                                   logfact[b - nij] - logfact[n - a - b + nij];
                emi += term * std::exp(logweight);
            }
        }
    }

    double denom = std::max(hu, hv) - emi;
    if (std::abs(denom) < 1e-15) return identical_partitions(t) ? 1.0 : 0.0;
    return (mi - emi) / denom;
}

double relative_gap(double ub, double lb) {
    if (ub == 0.0 && lb == 0.0) return 0.0;
    return (ub - lb) / ub;
}

}  // namespace cmssc
