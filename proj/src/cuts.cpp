#include "cmssc/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace cmssc {

bool Cut::same_support(const Cut& other) const {
    return kind == other.kind && indices == other.indices;
}

namespace {

std::vector<int> clique_canonical(std::vector<int> q) {
    std::sort(q.begin(), q.end());
    return q;
}

struct CutKey {
    CutKind kind;
    std::vector<int> indices;
    bool operator<(const CutKey& o) const {
        if (kind != o.kind) return kind < o.kind;
        return indices < o.indices;
    }
};

CutKey key_of(const Cut& c) { return {c.kind, c.indices}; }

}  // namespace

std::vector<Cut> separate_pair(const Matrix& z, double tol, int budget,
                               std::uint64_t seed) {
    const int n = static_cast<int>(z.rows());
    std::vector<Cut> out;
    auto consider = [&](int i, int j) {
        double viol = z(i, j) - z(i, i);
        if (viol > tol) out.push_back({CutKind::Pair, {i, j}, viol});
    };
    if (static_cast<long long>(budget) >= static_cast<long long>(n) * n) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) consider(i, j);
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<IndexPair> seen;
    for (int t = 0; t < budget; ++t) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (!seen.insert({i, j}).second) continue;
        consider(i, j);
    }
    return out;
}

std::vector<Cut> separate_triangle(const Matrix& z, double tol, int budget,
                                   std::uint64_t seed) {
    const int n = static_cast<int>(z.rows());
    std::vector<Cut> out;
    auto consider = [&](int i, int j, int h) {
        double viol = z(i, j) + z(i, h) - z(i, i) - z(j, h);
        if (viol > tol) out.push_back({CutKind::Triangle, {i, j, h}, viol});
    };
    if (static_cast<long long>(budget) >=
        static_cast<long long>(n) * n * std::max(n, 1)) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int h = j + 1; h < n; ++h)
                    if (j != i && h != i) consider(i, j, h);
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<std::tuple<int, int, int>> seen;
    for (int t = 0; t < budget; ++t) {
        int i = pick(rng), j = pick(rng), h = pick(rng);
        if (i == j || i == h || j == h) continue;
        if (j > h) std::swap(j, h);
        if (!seen.insert({i, j, h}).second) continue;
        consider(i, j, h);
    }
    return out;
}

std::vector<Cut> separate_clique(const Matrix& z, int k, int n_effective,
                                 double tol) {
    const int n = static_cast<int>(z.rows());
    std::vector<Cut> out;
    if (k + 1 > n) return out;
    const double rhs = 1.0 / (n_effective - k + 1);

    std::set<std::vector<int>> seen;
    for (int seed_vertex = 0; seed_vertex < n; ++seed_vertex) {
        std::vector<int> q{seed_vertex};
        std::vector<char> used(n, 0);
        used[seed_vertex] = 1;
        double total = 0.0;
        while (static_cast<int>(q.size()) < k + 1) {
            int best = -1;
            double best_incr = std::numeric_limits<double>::infinity();
            for (int cand = 0; cand < n; ++cand) {
                if (used[cand]) continue;
                double incr = 0.0;
                for (int member : q) incr += z(member, cand);
                if (incr < best_incr) {
                    best_incr = incr;
                    best = cand;
                }
            }
            q.push_back(best);
            used[best] = 1;
            total += best_incr;
        }
        double viol = rhs - total;
        if (viol > tol) {
            auto canon = clique_canonical(q);
            if (seen.insert(canon).second)
                out.push_back({CutKind::Clique, std::move(canon), viol});
        }
    }
    return out;
}

CutRow cut_to_row(const Cut& cut, int k, int n_effective) {
    CutRow row;
    switch (cut.kind) {
        case CutKind::Pair: {
            int i = cut.indices[0], j = cut.indices[1];
            row.entries.emplace_back(std::min(i, j), std::max(i, j), 1.0);
            row.entries.emplace_back(i, i, -1.0);
            row.sense = CutSense::LE;
            row.rhs = 0.0;
            break;
        }
        case CutKind::Triangle: {
            int i = cut.indices[0], j = cut.indices[1], h = cut.indices[2];
            row.entries.emplace_back(std::min(i, j), std::max(i, j), 1.0);
            row.entries.emplace_back(std::min(i, h), std::max(i, h), 1.0);
            row.entries.emplace_back(i, i, -1.0);
            row.entries.emplace_back(std::min(j, h), std::max(j, h), -1.0);
            row.sense = CutSense::LE;
            row.rhs = 0.0;
            break;
        }
        case CutKind::Clique: {
            for (size_t a = 0; a < cut.indices.size(); ++a)
                for (size_t b = a + 1; b < cut.indices.size(); ++b)
                    row.entries.emplace_back(std::min(cut.indices[a], cut.indices[b]),
                                             std::max(cut.indices[a], cut.indices[b]), 1.0);
            row.sense = CutSense::GE;
            row.rhs = 1.0 / (n_effective - k + 1);
            break;
        }
    }
    return row;
}

CpResult cutting_plane_loop(const ReducedInstance& reduced, CutPool pool,
                            const SdpSolverConfig& solver_cfg, const CpConfig& cfg,
                            double upper_bound, const SdpWarmStart* warm0) {
    if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    const int n_eff = cfg.n_effective > 0 ? cfg.n_effective : reduced.n();
    const int k = reduced.k;

    // children start from the cuts the parent kept in its last model
    std::set<CutKey> active_keys;
    std::vector<Cut> active;
    for (const Cut& c : pool.inherited)
        if (active_keys.insert(key_of(c)).second) active.push_back(c);
    for (const Cut& c : pool.active)
        if (active_keys.insert(key_of(c)).second) active.push_back(c);

    CpResult result;
    result.pool = pool;
    double prev_lb = -std::numeric_limits<double>::infinity();
    double best_lb = -std::numeric_limits<double>::infinity();
    SdpWarmStart warm;
    bool have_warm = false;
    if (warm0 && warm0->z.rows() == reduced.s()) {
        warm = *warm0;
        warm.cut_duals = Vector();
        have_warm = true;
    }

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        std::vector<CutRow> rows;
        rows.reserve(active.size());
        for (const Cut& c : active) rows.push_back(cut_to_row(c, k, n_eff));
        SdpModel model = build_model(reduced, rows);
        SdpSolution sol = solve(model, solver_cfg, have_warm ? &warm : nullptr);
        DualCertificate cert = safe_lower_bound(model, sol);

        result.rounds = round;
        result.solution = sol;
        result.pool.active = active;
        result.pool.inherited = active;
        if (cert.safe_lb > best_lb) {
            best_lb = cert.safe_lb;
            result.certificate = cert;
        }

        CpRoundLog log;
        log.round = round;
        log.cuts_in_model = static_cast<int>(active.size());
        log.safe_lb = cert.safe_lb;

        // good enough to prune this node
        if (std::isfinite(upper_bound) &&
            best_lb >= upper_bound * (1.0 - cfg.gap_tol)) {
            result.log.push_back(log);
            break;
        }

        std::uint64_t round_seed = cfg.seed * 1000003u + static_cast<std::uint64_t>(round);
        std::vector<Cut> pairs =
            separate_pair(sol.z, pool.violation_tol, pool.batch_cap, round_seed);
        std::vector<Cut> triangles =
            separate_triangle(sol.z, pool.violation_tol, pool.batch_cap, round_seed + 1);

        std::vector<Cut> ranked;
        ranked.reserve(pairs.size() + triangles.size());
        ranked.insert(ranked.end(), pairs.begin(), pairs.end());
        ranked.insert(ranked.end(), triangles.begin(), triangles.end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const Cut& a, const Cut& b) { return a.violation > b.violation; });
        size_t keep = ranked.empty()
                          ? 0
                          : static_cast<size_t>(
                                std::ceil(pool.keep_fraction * static_cast<double>(ranked.size())));
        ranked.resize(std::min(keep, ranked.size()));

        std::vector<Cut> cliques = separate_clique(sol.z, k, n_eff, pool.violation_tol);

        std::vector<Cut> additions;
        for (auto& c : ranked)
            if (active_keys.insert(key_of(c)).second) {
                if (c.kind == CutKind::Pair) ++log.added_pair;
                else ++log.added_triangle;
                additions.push_back(std::move(c));
            }
        for (auto& c : cliques)
            if (active_keys.insert(key_of(c)).second) {
                ++log.added_clique;
                additions.push_back(std::move(c));
            }

        if (additions.empty()) {
            result.log.push_back(log);
            break;  // relaxation is cut-free at this tolerance
        }
        if (round > 1 &&
            cert.safe_lb - prev_lb < cfg.stall_tol * std::max(1.0, std::abs(cert.safe_lb))) {
            result.log.push_back(log);
            break;  // bound stalled
        }
        prev_lb = cert.safe_lb;
        if (round == cfg.max_rounds) {
            result.log.push_back(log);
            break;
        }

        // purge cuts that were loose in the solved model
        std::vector<Cut> kept;
        kept.reserve(active.size());
        for (size_t t = 0; t < active.size(); ++t) {
            double slack = std::abs(rows[t].lhs(sol.z) - rows[t].rhs);
            if (slack > cfg.activity_tol) {
                active_keys.erase(key_of(active[t]));
                ++log.purged;
            } else {
                kept.push_back(active[t]);
            }
        }
        kept.insert(kept.end(), additions.begin(), additions.end());
        active = std::move(kept);

        warm.z = sol.z;
        warm.v = sol.v_dual;
        warm.y = sol.y;
        // cut duals do not survive the purge/extend reshuffle
        warm.cut_duals = Vector();
        have_warm = true;
        result.log.push_back(log);
    }
    return result;
}

}  // namespace cmssc
