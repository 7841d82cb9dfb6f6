#include "cmssc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "cmssc/kernels.hpp"

namespace cmssc {

namespace {

// Union-find over [0, n).
struct DisjointSets {
    std::vector<int> parent;

    explicit DisjointSets(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // keep the smaller index as root
        parent[b] = a;
        return true;
    }
};

std::vector<std::vector<int>> ml_components(int n, const std::set<IndexPair>& ml) {
    DisjointSets ds(n);
    for (const auto& [i, j] : ml) ds.unite(i, j);
    std::vector<std::vector<int>> by_root(n);
    for (int i = 0; i < n; ++i) by_root[ds.find(i)].push_back(i);
    std::vector<std::vector<int>> comps;
    for (auto& c : by_root)
        if (!c.empty()) comps.push_back(std::move(c));
    // roots are minima of their component, so this order is canonical
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

}  // namespace

Matrix ReducedInstance::selector() const {
    Matrix t = Matrix::Zero(s(), n());
    for (int i = 0; i < s(); ++i)
        for (int j : components[i]) t(i, j) = 1.0;
    return t;
}

bool ReducedInstance::cl_forbids(int a, int b) const {
    IndexPair p = make_pair_sorted(a, b);
    return std::binary_search(lifted_cl.begin(), lifted_cl.end(), p);
}

Matrix ReducedInstance::component_means() const {
    Matrix m = super_sum;
    for (int i = 0; i < s(); ++i) m.row(i) /= sizes(i);
    return m;
}

double ReducedInstance::assignment_objective(const std::vector<int>& labels) const {
    Matrix cluster_sum = Matrix::Zero(k, d());
    Vector cluster_cnt = Vector::Zero(k);
    for (int i = 0; i < s(); ++i) {
        cluster_sum.row(labels[i]) += super_sum.row(i);
        cluster_cnt(labels[i]) += sizes(i);
    }
    double obj = trace_w;
    for (int j = 0; j < k; ++j)
        if (cluster_cnt(j) > 0) obj -= cluster_sum.row(j).squaredNorm() / cluster_cnt(j);
    return obj;
}

Matrix ReducedInstance::assignment_centroids(const std::vector<int>& labels) const {
    Matrix cluster_sum = Matrix::Zero(k, d());
    Vector cluster_cnt = Vector::Zero(k);
    for (int i = 0; i < s(); ++i) {
        cluster_sum.row(labels[i]) += super_sum.row(i);
        cluster_cnt(labels[i]) += sizes(i);
    }
    for (int j = 0; j < k; ++j)
        if (cluster_cnt(j) > 0) cluster_sum.row(j) /= cluster_cnt(j);
    return cluster_sum;
}

std::vector<int> ReducedInstance::expand_labels(const std::vector<int>& labels) const {
    std::vector<int> out(n());
    for (int i = 0; i < s(); ++i)
        for (int j : components[i]) out[j] = labels[i];
    return out;
}

Matrix gram_matrix(const Dataset& data) {
    data.validate();
    return kernels::gram(data.points);
}

ReduceResult reduce(const Dataset& data, const ConstraintSet& cons, int k) {
    data.validate();
    const int n = data.n();
    cons.validate(n);
    if (k < 1) throw std::invalid_argument("k must be positive");

    ReducedInstance red;
    red.components = ml_components(n, cons.ml);
    red.comp_of.assign(n, -1);
    for (int c = 0; c < static_cast<int>(red.components.size()); ++c)
        for (int j : red.components[c]) red.comp_of[j] = c;

    const int s = red.s();
    std::set<IndexPair> lifted;
    for (const auto& [p, q] : cons.cl) {
        int a = red.comp_of[p], b = red.comp_of[q];
        if (a == b)
            return Infeasibility{Infeasibility::Kind::ClWithinComponent, {p, q}};
        lifted.insert(make_pair_sorted(a, b));
    }
    if (s < k) return Infeasibility{Infeasibility::Kind::TooFewSuperPoints, {-1, -1}};

    red.lifted_cl.assign(lifted.begin(), lifted.end());
    red.k = k;
    red.sizes = Vector(s);
    red.super_sum = Matrix::Zero(s, data.d());
    for (int i = 0; i < s; ++i) {
        red.sizes(i) = static_cast<double>(red.components[i].size());
        for (int j : red.components[i]) red.super_sum.row(i) += data.points.row(j);
    }
    red.super_gram = kernels::gram(red.super_sum);
    red.trace_w = data.points.rowwise().squaredNorm().sum();
    return red;
}

ConstraintSet infer_ml_for_k2(const ConstraintSet& cons, int k) {
    if (k != 2) return cons;
    const int n = [&] {
        int m = 0;
        for (const auto& [i, j] : cons.ml) m = std::max({m, i + 1, j + 1});
        for (const auto& [i, j] : cons.cl) m = std::max({m, i + 1, j + 1});
        return m;
    }();

    DisjointSets ds(n);
    for (const auto& [i, j] : cons.ml) ds.unite(i, j);

    // Two components CL-adjacent to a common component must merge. Merging
    // can expose new common neighbours, so run to fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<int, std::vector<int>> neighbours;  // component root -> CL roots
        for (const auto& [i, j] : cons.cl) {
            int a = ds.find(i), b = ds.find(j);
            if (a == b) continue;  // contradiction, surfaces later in reduce
            neighbours[a].push_back(b);
            neighbours[b].push_back(a);
        }
        for (auto& [h, list] : neighbours) {
            for (size_t t = 1; t < list.size(); ++t)
                if (ds.unite(list[0], list[t])) changed = true;
        }
    }

    ConstraintSet out = cons;
    // emit one ML pair per derived merge: every member links to its root
    for (int i = 0; i < n; ++i) {
        int r = ds.find(i);
        if (r != i) out.ml.insert({r, i});
    }
    return out;
}

ConstraintSet generate_constraints(const GroundTruth& truth, int target_ml,
                                   int target_cl, std::uint64_t seed) {
    truth.validate();
    const int n = truth.n();
    if (n < 2 && (target_ml > 0 || target_cl > 0))
        throw std::runtime_error("not enough points to generate constraints");

    constexpr long long kMaxDraws = 1'000'000;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);

    ConstraintSet out;
    int need_ml = target_ml, need_cl = target_cl;
    for (long long draw = 0; draw < kMaxDraws && (need_ml > 0 || need_cl > 0); ++draw) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        IndexPair p = make_pair_sorted(i, j);
        if (truth.labels[i] == truth.labels[j]) {
            if (need_ml > 0 && out.ml.insert(p).second) --need_ml;
        } else {
            if (need_cl > 0 && out.cl.insert(p).second) --need_cl;
        }
    }
    if (need_ml > 0 || need_cl > 0)
        throw std::runtime_error("constraint generation exhausted its draw budget; "
                                 "targets unreachable for these labels");
    return out;
}

ConstraintSet translate_geometric(const Dataset& data,
                                  std::optional<double> diameter,
                                  std::optional<double> split) {
    data.validate();
    if (diameter && *diameter <= 0) throw std::invalid_argument("diameter must be positive");
    if (split && *split <= 0) throw std::invalid_argument("split must be positive");

    ConstraintSet out;
    if (!diameter && !split) return out;
    Matrix d2 = kernels::pairwise_sq_dists(data.points);
    const int n = data.n();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dist = std::sqrt(d2(i, j));
            if (diameter && dist > *diameter) out.cl.insert({i, j});
            if (split && dist < *split) out.ml.insert({i, j});
        }
    }
    return out;
}

}  // namespace cmssc
