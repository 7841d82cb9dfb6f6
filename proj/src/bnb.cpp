#include "cmssc/bnb.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

#include "cmssc/feasibility.hpp"
#include "cmssc/metrics.hpp"

namespace cmssc {

std::optional<IndexPair> select_branching_pair(const Matrix& z, double integrality_tol) {
    const int n = static_cast<int>(z.rows());
    double best = -std::numeric_limits<double>::infinity();
    IndexPair arg{-1, -1};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double score = std::min(z(i, j), (z.row(i) - z.row(j)).squaredNorm());
            if (score > best) {
                best = score;
                arg = {i, j};
            }
        }
    if (arg.first < 0 || best <= integrality_tol) return std::nullopt;
    return arg;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t h = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    h ^= h >> 30;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 27;
    h *= 0x94D049BB133111EBull;
    h ^= h >> 31;
    return h;
}

struct NodeTask {
    long long id = 0;
    long long parent = -1;
    int depth = 0;
    double parent_lb = -std::numeric_limits<double>::infinity();
    std::vector<IndexPair> extra_ml;
    std::vector<IndexPair> extra_cl;
    std::vector<Cut> inherited;  // indices are original-point representatives
    bool has_warm = false;
    Matrix warm_z, warm_v;
    Vector warm_y;
    std::vector<int> warm_comp_of;  // original index -> parent component
};

struct TaskOrder {
    bool operator()(const NodeTask& a, const NodeTask& b) const {
        if (a.parent_lb != b.parent_lb) return a.parent_lb > b.parent_lb;
        return a.id > b.id;  // FIFO among equal bounds
    }
};

struct Shared {
    const Dataset& data;
    const ConstraintSet& base;
    const int k;
    const BnbConfig& cfg;

    Shared(const Dataset& d, const ConstraintSet& b, int kk, const BnbConfig& c)
        : data(d), base(b), k(kk), cfg(c) {}

    std::mutex mtx;
    std::condition_variable cv;
    std::priority_queue<NodeTask, std::vector<NodeTask>, TaskOrder> open;
    std::multiset<double> inflight_lbs;
    double global_ub = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;
    long long next_id = 1;  // 0 is the root
    int evaluated = 0;
    bool stop = false;
    std::vector<NodeLogRow> log;
    RootStats root_stats;

    // the global lower bound lives on the frontier: open nodes and nodes
    // currently being evaluated; an empty frontier certifies the incumbent
    double lowest_lb_locked() const {
        double lb = std::numeric_limits<double>::infinity();
        if (!open.empty()) lb = std::min(lb, open.top().parent_lb);
        if (!inflight_lbs.empty()) lb = std::min(lb, *inflight_lbs.begin());
        return lb;
    }
};

// translate a cut anchored at original representatives into the node's
// component indices; degenerate cuts (merged endpoints) are dropped
std::vector<Cut> remap_cuts(const std::vector<Cut>& cuts, const ReducedInstance& red) {
    std::vector<Cut> out;
    out.reserve(cuts.size());
    for (const Cut& c : cuts) {
        Cut mapped = c;
        std::set<int> distinct;
        for (size_t t = 0; t < c.indices.size(); ++t) {
            int comp = red.comp_of[c.indices[t]];
            mapped.indices[t] = comp;
            distinct.insert(comp);
        }
        if (distinct.size() != c.indices.size()) continue;
        if (mapped.kind == CutKind::Clique)
            std::sort(mapped.indices.begin(), mapped.indices.end());
        else if (mapped.kind == CutKind::Triangle && mapped.indices[1] > mapped.indices[2])
            std::swap(mapped.indices[1], mapped.indices[2]);
        out.push_back(std::move(mapped));
    }
    return out;
}

std::vector<Cut> anchor_cuts(const std::vector<Cut>& cuts, const ReducedInstance& red) {
    std::vector<Cut> out = cuts;
    for (Cut& c : out)
        for (int& idx : c.indices) idx = red.components[idx].front();
    return out;
}

struct EvalOutcome {
    NodeLogRow row;
    double ub = std::numeric_limits<double>::infinity();
    std::vector<int> labels;  // original points, when ub is finite
    std::vector<NodeTask> children;  // empty for leaves
};

EvalOutcome evaluate_node(Shared& shared, const NodeTask& task, double ub_snapshot) {
    const BnbConfig& cfg = shared.cfg;
    auto t0 = std::chrono::steady_clock::now();
    EvalOutcome out;
    out.row.id = task.id;
    out.row.parent = task.parent;
    out.row.depth = task.depth;
    out.row.ub = ub_snapshot;

    ConstraintSet cons = shared.base;
    for (const auto& [i, j] : task.extra_ml) cons.add_ml(i, j);
    for (const auto& [i, j] : task.extra_cl) cons.add_cl(i, j);
    cons = infer_ml_for_k2(cons, shared.k);

    ReduceResult rr = reduce(shared.data, cons, shared.k);
    auto finish = [&](const char* action, double lb) {
        out.row.action = action;
        out.row.safe_lb = lb;
        out.row.gap = std::isfinite(ub_snapshot) && std::isfinite(lb)
                          ? std::max(0.0, relative_gap(ub_snapshot, lb))
                          : 0.0;
        out.row.time_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (is_infeasible(rr)) {
        out.row.size = 0;
        finish("infeasible", std::numeric_limits<double>::infinity());
        return out;
    }
    const ReducedInstance red = std::get<ReducedInstance>(std::move(rr));
    out.row.size = red.s();

    if (!check_feasible(red).feasible()) {
        finish("infeasible", std::numeric_limits<double>::infinity());
        return out;
    }

    CutPool pool;
    pool.violation_tol = cfg.violation_tol;
    pool.batch_cap = cfg.batch_cap;
    pool.keep_fraction = cfg.keep_fraction;
    pool.inherited = remap_cuts(task.inherited, red);

    CpConfig cp_cfg;
    cp_cfg.max_rounds = task.depth == 0 ? cfg.root_max_rounds : cfg.child_max_rounds;
    cp_cfg.stall_tol = cfg.stall_tol;
    cp_cfg.activity_tol = cfg.activity_tol;
    cp_cfg.gap_tol = cfg.gap_tol;
    cp_cfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(task.id));
    cp_cfg.n_effective = red.n();

    SdpSolverConfig solver_cfg = cfg.sdp;
    SdpWarmStart warm;
    SdpWarmStart* warm_ptr = nullptr;
    if (cfg.warm_start && task.has_warm && task.warm_z.rows() > 0) {
        const int s = red.s();
        warm.z = Matrix(s, s);
        warm.v = Matrix(s, s);
        warm.y = Vector(s + 1);
        for (int a = 0; a < s; ++a) {
            int pa = task.warm_comp_of[red.components[a].front()];
            warm.y(a) = task.warm_y(pa);
            for (int b = 0; b < s; ++b) {
                int pb = task.warm_comp_of[red.components[b].front()];
                warm.z(a, b) = task.warm_z(pa, pb);
                warm.v(a, b) = task.warm_v(pa, pb);
            }
        }
        warm.y(s) = task.warm_y(task.warm_y.size() - 1);
        warm_ptr = &warm;
    }

    CpResult cp = cutting_plane_loop(red, pool, solver_cfg, cp_cfg, ub_snapshot, warm_ptr);

    double lb = std::max(cp.certificate.safe_lb, task.parent_lb);
    out.row.rounds = cp.rounds;
    out.row.cuts = static_cast<int>(cp.pool.active.size());
    out.row.safe_lb = lb;
    out.row.cert_min_eig = cp.certificate.s_tilde_min_eig;
    out.row.cert_clamped = cp.certificate.clamped_v + cp.certificate.clamped_cuts;

    // upper bound from the rounded relaxation
    Matrix init = sdp_round_init(cp.solution.z, red,
                                 mix_seed(cfg.seed, static_cast<std::uint64_t>(task.id) * 2 + 1));
    HeuristicConfig hcfg = cfg.heuristic;
    AssignmentResult hres = ipc_kmeans(red, init, hcfg);
    if (std::holds_alternative<Assignment>(hres)) {
        const Assignment& a = std::get<Assignment>(hres);
        out.ub = a.objective;
        out.labels = red.expand_labels(a.labels);
    }

    double ub_eff = std::min(ub_snapshot, out.ub);
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (std::isfinite(ub_eff) && lb >= ub_eff * (1.0 - cfg.gap_tol)) {
        out.row.action = "pruned";
        out.row.ub = ub_eff;
        out.row.gap = std::max(0.0, relative_gap(ub_eff, lb));
        out.row.time_sec = elapsed();
        return out;
    }

    std::optional<IndexPair> pair = select_branching_pair(cp.solution.z, cfg.integrality_tol);
    if (!pair) {
        out.row.action = "integral";
        out.row.ub = ub_eff;
        out.row.gap = std::isfinite(ub_eff) ? std::max(0.0, relative_gap(ub_eff, lb)) : 0.0;
        out.row.time_sec = elapsed();
        return out;
    }

    int rep_i = red.components[pair->first].front();
    int rep_j = red.components[pair->second].front();
    std::vector<Cut> inherited = anchor_cuts(cp.pool.active, red);

    NodeTask ml_child, cl_child;
    for (NodeTask* child : {&ml_child, &cl_child}) {
        child->parent = task.id;
        child->depth = task.depth + 1;
        child->parent_lb = lb;
        child->extra_ml = task.extra_ml;
        child->extra_cl = task.extra_cl;
        child->inherited = inherited;
        if (cfg.warm_start) {
            child->has_warm = true;
            child->warm_z = cp.solution.z;
            child->warm_v = cp.solution.v_dual;
            child->warm_y = cp.solution.y;
            child->warm_comp_of = red.comp_of;
        }
    }
    ml_child.extra_ml.emplace_back(make_pair_sorted(rep_i, rep_j));
    cl_child.extra_cl.emplace_back(make_pair_sorted(rep_i, rep_j));
    out.children.push_back(std::move(ml_child));
    out.children.push_back(std::move(cl_child));

    out.row.action = "branched";
    out.row.ub = ub_eff;
    out.row.gap = std::isfinite(ub_eff) ? std::max(0.0, relative_gap(ub_eff, lb)) : 0.0;
    out.row.time_sec = elapsed();
    return out;
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    return out;
}

void worker_loop(Shared& shared) {
    std::unique_lock<std::mutex> lock(shared.mtx);
    while (true) {
        shared.cv.wait(lock, [&] {
            return shared.stop || !shared.open.empty() ||
                   shared.inflight_lbs.empty();
        });
        if (shared.stop) break;
        if (shared.open.empty()) {
            if (shared.inflight_lbs.empty()) break;  // tree exhausted
            continue;
        }
        if (shared.evaluated >= shared.cfg.max_nodes) {
            shared.stop = true;
            shared.cv.notify_all();
            break;
        }

        NodeTask task = shared.open.top();
        shared.open.pop();
        shared.evaluated += 1;
        double ub_snapshot = shared.global_ub;

        // cheap prune against the current incumbent
        if (std::isfinite(ub_snapshot) &&
            task.parent_lb >= ub_snapshot * (1.0 - shared.cfg.gap_tol)) {
            NodeLogRow row;
            row.id = task.id;
            row.parent = task.parent;
            row.depth = task.depth;
            row.safe_lb = task.parent_lb;
            row.ub = ub_snapshot;
            row.gap = std::max(0.0, relative_gap(ub_snapshot, task.parent_lb));
            row.action = "pruned";
            shared.log.push_back(row);
            continue;
        }

        auto it = shared.inflight_lbs.insert(task.parent_lb);
        lock.unlock();

        EvalOutcome outcome = evaluate_node(shared, task, ub_snapshot);

        lock.lock();
        shared.inflight_lbs.erase(it);
        if (std::isfinite(outcome.ub) && outcome.ub < shared.global_ub) {
            shared.global_ub = outcome.ub;
            shared.best_labels = outcome.labels;
        }
        for (NodeTask& child : outcome.children) {
            child.id = shared.next_id++;
            shared.open.push(std::move(child));
        }
        shared.log.push_back(outcome.row);
        if (task.depth == 0) {
            shared.root_stats.cp_rounds = outcome.row.rounds;
            shared.root_stats.inequalities = outcome.row.cuts;
            shared.root_stats.gap = std::isfinite(shared.global_ub)
                                        ? std::max(0.0, relative_gap(shared.global_ub,
                                                                     outcome.row.safe_lb))
                                        : 1.0;
            shared.root_stats.time_sec = outcome.row.time_sec;
        }

        // optimality by gap across the whole frontier
        if (std::isfinite(shared.global_ub)) {
            double gap = std::max(0.0, relative_gap(shared.global_ub, shared.lowest_lb_locked()));
            if (gap <= shared.cfg.gap_tol) {
                shared.stop = true;
            }
        }
        shared.cv.notify_all();
    }
    shared.cv.notify_all();
}

}  // namespace

SolveResult solve(const Dataset& data, const ConstraintSet& cons, int k,
                  const BnbConfig& cfg) {
    data.validate();
    cons.validate(data.n());
    if (k < 1 || k > data.n()) throw std::invalid_argument("k out of range");

    BnbConfig local_cfg = cfg;
    local_cfg.max_nodes = std::max(1, cfg.max_nodes);

    auto t0 = std::chrono::steady_clock::now();
    Shared shared(data, cons, k, local_cfg);

    NodeTask root;
    root.id = 0;
    shared.open.push(root);

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : std::min(16u, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        worker_loop(shared);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back([&shared] { worker_loop(shared); });
        for (auto& t : pool) t.join();
    }

    SolveResult result;
    result.nodes_explored = shared.evaluated;
    result.root = shared.root_stats;
    result.node_log = std::move(shared.log);
    result.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double lb = shared.lowest_lb_locked();

    if (!std::isfinite(shared.global_ub)) {
        // every evaluated node was infeasible, which can only start at the root
        result.status = SolveStatus::Infeasible;
        result.upper_bound = std::numeric_limits<double>::infinity();
        result.lower_bound = std::numeric_limits<double>::infinity();
        result.gap = 0.0;
        return result;
    }

    result.upper_bound = shared.global_ub;
    result.lower_bound = std::min(lb, shared.global_ub);
    result.gap = std::max(0.0, relative_gap(result.upper_bound, result.lower_bound));
    result.best_labels = canonical_labels(shared.best_labels);
    result.status =
        result.gap <= cfg.gap_tol ? SolveStatus::Optimal : SolveStatus::NodeLimit;
    return result;
}

}  // namespace cmssc
