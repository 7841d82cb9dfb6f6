#include "cmssc/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cmssc/feasibility.hpp"

namespace cmssc {

namespace {

// weighted k-means++ seeding: returns row indices of the chosen seeds
std::vector<int> kmeanspp_seeds(const Matrix& rows, const Vector& weights, int k,
                                std::mt19937_64& rng) {
    const int n = static_cast<int>(rows.rows());
    std::vector<int> seeds;
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());

    std::vector<double> cum(n);
    auto draw = [&](auto score) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += score(i);
            cum[i] = total;
        }
        if (total <= 0.0) {
            // all mass collapsed; take the first unused row
            for (int i = 0; i < n; ++i)
                if (std::find(seeds.begin(), seeds.end(), i) == seeds.end()) return i;
            return 0;
        }
        double r = std::uniform_real_distribution<double>(0.0, total)(rng);
        return static_cast<int>(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
    };

    seeds.push_back(draw([&](int i) { return weights(i); }));
    while (static_cast<int>(seeds.size()) < k) {
        for (int i = 0; i < n; ++i)
            dist2[i] = std::min(dist2[i], (rows.row(i) - rows.row(seeds.back())).squaredNorm());
        seeds.push_back(draw([&](int i) { return weights(i) * dist2[i]; }));
    }
    return seeds;
}

// Lloyd iterations on weighted points; returns group labels
std::vector<int> weighted_lloyd(const Matrix& rows, const Vector& weights, int k,
                                std::mt19937_64& rng) {
    const int n = static_cast<int>(rows.rows());
    const int d = static_cast<int>(rows.cols());
    std::vector<int> seeds = kmeanspp_seeds(rows, weights, k, rng);
    Matrix centers(k, d);
    for (int c = 0; c < k; ++c) centers.row(c) = rows.row(seeds[c]);

    std::vector<int> labels(n, -1);
    for (int sweep = 0; sweep < 100; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (rows.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                double dd = (rows.row(i) - centers.row(c)).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        // an empty group steals the point farthest from its center
        for (int c = 0; c < k; ++c) {
            if (std::count(labels.begin(), labels.end(), c) > 0) continue;
            int worst = -1;
            double worst_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (std::count(labels.begin(), labels.end(), labels[i]) < 2) continue;
                double dd = weights(i) * (rows.row(i) - centers.row(labels[i])).squaredNorm();
                if (dd > worst_d) {
                    worst_d = dd;
                    worst = i;
                }
            }
            if (worst >= 0) {
                labels[worst] = c;
                changed = true;
            }
        }
        Matrix sums = Matrix::Zero(k, d);
        Vector mass = Vector::Zero(k);
        for (int i = 0; i < n; ++i) {
            sums.row(labels[i]) += weights(i) * rows.row(i);
            mass(labels[i]) += weights(i);
        }
        for (int c = 0; c < k; ++c)
            if (mass(c) > 0) centers.row(c) = sums.row(c) / mass(c);
        if (!changed) break;
    }
    return labels;
}

int count_distinct_rows(const Matrix& rows, double tol) {
    const int n = static_cast<int>(rows.rows());
    int distinct = 0;
    std::vector<char> matched(n, 0);
    for (int i = 0; i < n; ++i) {
        if (matched[i]) continue;
        ++distinct;
        for (int j = i + 1; j < n; ++j)
            if (!matched[j] && (rows.row(i) - rows.row(j)).lpNorm<Eigen::Infinity>() <= tol)
                matched[j] = 1;
    }
    return distinct;
}

struct AssignmentSearch {
    const ReducedInstance& red;
    const Matrix& cost;  // s x k
    long long node_cap;

    std::vector<std::vector<int>> adj;
    std::vector<int> order;            // vertices by descending regret
    std::vector<int> labels;
    std::vector<std::vector<int>> forbid_count;  // CL propagation counters
    std::vector<int> used_count;       // assignments per cluster
    int used_clusters = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;
    long long nodes = 0;
    bool capped = false;

    AssignmentSearch(const ReducedInstance& r, const Matrix& c, long long cap)
        : red(r), cost(c), node_cap(cap) {
        const int s = red.s();
        adj.assign(s, {});
        for (const auto& [a, b] : red.lifted_cl) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        labels.assign(s, -1);
        forbid_count.assign(s, std::vector<int>(red.k, 0));
        used_count.assign(red.k, 0);

        order.resize(s);
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> regret(s);
        for (int i = 0; i < s; ++i) {
            double first = std::numeric_limits<double>::infinity();
            double second = std::numeric_limits<double>::infinity();
            for (int c2 = 0; c2 < red.k; ++c2) {
                double v = cost(i, c2);
                if (v < first) {
                    second = first;
                    first = v;
                } else if (v < second) {
                    second = v;
                }
            }
            regret[i] = (red.k > 1) ? second - first : 0.0;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return regret[a] > regret[b]; });
    }

    double remaining_bound(int depth) const {
        double bound = 0.0;
        for (size_t t = depth; t < order.size(); ++t) {
            int v = order[t];
            double mn = std::numeric_limits<double>::infinity();
            for (int c = 0; c < red.k; ++c)
                if (forbid_count[v][c] == 0) mn = std::min(mn, cost(v, c));
            if (!std::isfinite(mn)) return mn;
            bound += mn;
        }
        return bound;
    }

    void dfs(int depth, double acc) {
        if (++nodes > node_cap) {
            capped = true;
            return;
        }
        const int s = static_cast<int>(order.size());
        if (depth == s) {
            if (acc < best) {
                best = acc;
                best_labels = labels;
            }
            return;
        }
        int remaining = s - depth;
        int unused = red.k - used_clusters;
        if (remaining < unused) return;
        if (acc + remaining_bound(depth) >= best) return;

        int v = order[depth];
        std::vector<std::pair<double, int>> options;
        for (int c = 0; c < red.k; ++c) {
            if (forbid_count[v][c] > 0) continue;
            if (remaining == unused && used_count[c] > 0) continue;  // must open a new cluster
            options.emplace_back(cost(v, c), c);
        }
        std::sort(options.begin(), options.end());
        for (const auto& [cv, c] : options) {
            if (acc + cv >= best) break;
            labels[v] = c;
            if (used_count[c]++ == 0) ++used_clusters;
            for (int u : adj[v])
                if (labels[u] < 0) ++forbid_count[u][c];
            dfs(depth + 1, acc + cv);
            for (int u : adj[v])
                if (labels[u] < 0) --forbid_count[u][c];
            if (--used_count[c] == 0) --used_clusters;
            labels[v] = -1;
            if (capped) return;
        }
    }
};

}  // namespace

Matrix sdp_round_init(const Matrix& z, const ReducedInstance& reduced, std::uint64_t seed) {
    const int s = reduced.s();
    const int k = reduced.k;
    std::mt19937_64 rng(seed);

    std::vector<int> groups;
    double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
    if (count_distinct_rows(z, 1e-9 * scale) >= k) {
        groups = weighted_lloyd(z, reduced.sizes, k, rng);
    } else {
        // degenerate relaxation rows: seed directly on the super points
        Matrix means = reduced.component_means();
        std::vector<int> seeds = kmeanspp_seeds(means, reduced.sizes, k, rng);
        Matrix centroids(k, reduced.d());
        for (int c = 0; c < k; ++c) centroids.row(c) = means.row(seeds[c]);
        return centroids;
    }

    // groups of rows of Z -> weighted centroids in the original space
    Matrix sums = Matrix::Zero(k, reduced.d());
    Vector mass = Vector::Zero(k);
    for (int i = 0; i < s; ++i) {
        sums.row(groups[i]) += reduced.super_sum.row(i);
        mass(groups[i]) += reduced.sizes(i);
    }
    for (int c = 0; c < k; ++c)
        if (mass(c) > 0) sums.row(c) /= mass(c);
    return sums;
}

AssignmentResult constrained_assignment(const Matrix& centroids,
                                        const ReducedInstance& reduced,
                                        long long node_cap, bool* proven_optimal) {
    if (!centroids.allFinite()) throw std::invalid_argument("non-finite centroids");
    const int s = reduced.s();
    const int k = reduced.k;

    Matrix cost(s, k);
    Matrix means = reduced.component_means();
    for (int i = 0; i < s; ++i)
        for (int c = 0; c < k; ++c)
            cost(i, c) = reduced.sizes(i) * (means.row(i) - centroids.row(c)).squaredNorm();

    AssignmentSearch search(reduced, cost, node_cap);
    search.dfs(0, 0.0);
    if (proven_optimal) *proven_optimal = !search.capped;

    if (search.best_labels.empty()) {
        if (search.capped) {
            // ran out of budget before any leaf: fall back to any feasible witness
            FeasibilityResult fr = check_feasible(reduced);
            if (!fr.feasible()) return Infeasibility{Infeasibility::Kind::NoColoring, {-1, -1}};
            search.best_labels = *fr.assignment;
        } else {
            return Infeasibility{Infeasibility::Kind::NoColoring, {-1, -1}};
        }
    }

    Assignment out;
    out.labels = search.best_labels;
    out.centroids = reduced.assignment_centroids(out.labels);
    out.objective = reduced.assignment_objective(out.labels);
    return out;
}

AssignmentResult ipc_kmeans(const ReducedInstance& reduced, const Matrix& init_centroids,
                            const HeuristicConfig& cfg, IpcTrace* trace) {
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    Matrix centers = init_centroids;
    Assignment current;
    std::vector<int> prev_labels;
    double prev_obj = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= cfg.max_iter; ++it) {
        bool proven = true;
        AssignmentResult res =
            constrained_assignment(centers, reduced, cfg.assignment_node_cap, &proven);
        if (std::holds_alternative<Infeasibility>(res)) return res;
        current = std::get<Assignment>(std::move(res));
        if (trace) {
            trace->iterations = it;
            trace->objectives.push_back(current.objective);
            trace->assignment_proven_optimal =
                trace->assignment_proven_optimal && proven;
        }
        if (current.labels == prev_labels) break;
        // both half-steps are exact minimizers, so the cost cannot rise;
        // stop as well when it fails to strictly improve (tie safety)
        if (current.objective >= prev_obj) break;
        prev_labels = current.labels;
        prev_obj = current.objective;
        centers = current.centroids;
    }
    return current;
}

}  // namespace cmssc
