#include "cmssc/oracle.hpp"

#include <cmath>

namespace cmssc {

namespace {

struct Enumerator {
    const ReducedInstance& red;
    int s, k, d;
    std::vector<std::vector<int>> cl_adj;  // lifted CL adjacency, earlier indices only
    std::vector<int> labels;
    Matrix cluster_sum;
    Vector cluster_cnt;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;

    explicit Enumerator(const ReducedInstance& r)
        : red(r), s(r.s()), k(r.k), d(r.d()), labels(r.s(), -1) {
        cl_adj.assign(s, {});
        for (const auto& [a, b] : r.lifted_cl) cl_adj[b].push_back(a);
        cluster_sum = Matrix::Zero(k, d);
        cluster_cnt = Vector::Zero(k);
    }

    // canonical labelings: label(i) <= 1 + max label used so far
    void walk(int i, int used) {
        if (s - i < k - used) return;  // cannot reach k nonempty clusters
        if (i == s) {
            double obj = red.trace_w;
            for (int j = 0; j < k; ++j)
                obj -= cluster_sum.row(j).squaredNorm() / cluster_cnt(j);
            if (obj < best - 1e-15) {
                best = obj;
                best_labels = labels;
            }
            return;
        }
        int limit = std::min(used + 1, k);
        for (int c = 0; c < limit; ++c) {
            bool blocked = false;
            for (int other : cl_adj[i])
                if (labels[other] == c) {
                    blocked = true;
                    break;
                }
            if (blocked) continue;
            labels[i] = c;
            cluster_sum.row(c) += red.super_sum.row(i);
            cluster_cnt(c) += red.sizes(i);
            walk(i + 1, std::max(used, c + 1));
            cluster_sum.row(c) -= red.super_sum.row(i);
            cluster_cnt(c) -= red.sizes(i);
            labels[i] = -1;
        }
    }
};

}  // namespace

OracleOutcome brute_force_solve(const Dataset& data, const ConstraintSet& cons, int k) {
    ReduceResult rr = reduce(data, cons, k);
    if (is_infeasible(rr)) return std::get<Infeasibility>(rr);
    const ReducedInstance& red = std::get<ReducedInstance>(rr);

    if (red.s() * std::log(static_cast<double>(k)) > std::log(1e7))
        throw TooLarge("instance too large for exhaustive enumeration");

    Enumerator en(red);
    en.walk(0, 0);
    if (!std::isfinite(en.best))
        return Infeasibility{Infeasibility::Kind::NoColoring, {-1, -1}};
    return OracleResult{en.best, red.expand_labels(en.best_labels)};
}

}  // namespace cmssc
