#include "cmssc/feasibility.hpp"

#include <algorithm>

namespace cmssc {

namespace {

// Backtracking k-coloring of one connected component, DSATUR vertex order,
// new colors tried in canonical order only (lowest unused first).
struct Colorer {
    int k;
    const std::vector<std::vector<int>>& adj;
    const std::vector<int>& vertices;  // of this component
    std::vector<int>& color;           // global color array, -1 = unset

    bool run() { return extend(0, 0); }

    int pick_next() const {
        int best = -1, best_sat = -1, best_deg = -1;
        for (int v : vertices) {
            if (color[v] >= 0) continue;
            std::vector<char> seen(k, 0);
            int sat = 0, deg = 0;
            for (int u : adj[v]) {
                if (color[u] >= 0 && !seen[color[u]]) {
                    seen[color[u]] = 1;
                    ++sat;
                }
                ++deg;
            }
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    }

    bool extend(int colored, int used) {
        if (colored == static_cast<int>(vertices.size())) return true;
        int v = pick_next();
        std::vector<char> blocked(k, 0);
        for (int u : adj[v])
            if (color[u] >= 0) blocked[color[u]] = 1;
        // existing colors first, then a single fresh one (symmetry breaking)
        int limit = std::min(used + 1, k);
        for (int c = 0; c < limit; ++c) {
            if (blocked[c]) continue;
            color[v] = c;
            if (extend(colored + 1, std::max(used, c + 1))) return true;
            color[v] = -1;
        }
        return false;
    }
};

}  // namespace

FeasibilityResult check_feasible(int s, int k, const std::vector<IndexPair>& cl) {
    if (k < 1 || s < k) return {};

    std::vector<std::vector<int>> adj(s);
    for (const auto& [a, b] : cl) {
        if (a == b) return {};  // self-loop: no coloring exists
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    std::vector<int> color(s, -1);
    std::vector<int> comp_of(s, -1);
    std::vector<std::vector<int>> comps;
    for (int v = 0; v < s; ++v) {
        if (comp_of[v] >= 0) continue;
        comps.emplace_back();
        std::vector<int> stack{v};
        comp_of[v] = static_cast<int>(comps.size()) - 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (int w : adj[u])
                if (comp_of[w] < 0) {
                    comp_of[w] = comp_of[u];
                    stack.push_back(w);
                }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }

    for (const auto& comp : comps) {
        Colorer colorer{k, adj, comp, color};
        if (!colorer.run()) return {};
    }

    // make the witness surjective: any class with two CL-compatible members
    // can donate one to an unused color; members of one class never clash
    std::vector<std::vector<int>> classes(k);
    for (int v = 0; v < s; ++v) classes[color[v]].push_back(v);
    for (int c = 0; c < k; ++c) {
        if (!classes[c].empty()) continue;
        int donor = -1;
        for (int d = 0; d < k; ++d)
            if (static_cast<int>(classes[d].size()) >= 2) {
                donor = d;
                break;
            }
        if (donor < 0) return {};  // cannot happen when s >= k
        int moved = classes[donor].back();
        classes[donor].pop_back();
        classes[c].push_back(moved);
        color[moved] = c;
    }
    return {std::move(color)};
}

FeasibilityResult check_feasible(const ReducedInstance& reduced) {
    return check_feasible(reduced.s(), reduced.k, reduced.lifted_cl);
}

}  // namespace cmssc
