#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cmssc/bnb.hpp"
#include "cmssc/feasibility.hpp"
#include "cmssc/io.hpp"
#include "cmssc/metrics.hpp"
#include "cmssc/oracle.hpp"
#include "cmssc/safe_bound.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNodeLimit = 2;
constexpr int kExitInfeasible = 3;

struct CommonArgs {
    std::string data_path;
    std::string constraints_path;
    int k = 2;
    std::uint64_t seed = 0;
    std::optional<double> diameter;
    std::optional<double> split;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--data", args.data_path, "dataset CSV")->required();
    cmd->add_option("--k", args.k, "number of clusters")->required();
    cmd->add_option("--constraints", args.constraints_path, "constraint file");
    cmd->add_option("--seed", args.seed, "random seed");
}

std::pair<cmssc::Dataset, cmssc::ConstraintSet> load_instance(const CommonArgs& args) {
    cmssc::Dataset data = cmssc::io::read_dataset(args.data_path);
    cmssc::ConstraintSet cons;
    if (!args.constraints_path.empty())
        cons = cmssc::io::read_constraints(args.constraints_path, data.n());
    return {std::move(data), std::move(cons)};
}

int run_solve(const CommonArgs& args, const cmssc::BnbConfig& cfg,
              const std::string& out_path, const std::string& node_log_path) {
    auto [data, cons] = load_instance(args);
    cmssc::SolveResult result = cmssc::solve(data, cons, args.k, cfg);

    if (!out_path.empty())
        cmssc::io::write_result_json(out_path, result);
    else
        std::cout << cmssc::io::result_to_json(result);
    if (!node_log_path.empty()) cmssc::io::write_node_log_csv(node_log_path, result.node_log);

    switch (result.status) {
        case cmssc::SolveStatus::Optimal: return kExitOk;
        case cmssc::SolveStatus::NodeLimit: return kExitNodeLimit;
        case cmssc::SolveStatus::Infeasible: return kExitInfeasible;
    }
    return kExitError;
}

int run_gen(const std::string& labels_path, const std::string& data_path, int ml, int cl,
            std::uint64_t seed, std::optional<double> diameter, std::optional<double> split,
            const std::string& out_path) {
    cmssc::ConstraintSet cons;
    if (!labels_path.empty()) {
        cmssc::GroundTruth truth{cmssc::io::read_labels(labels_path)};
        cons = cmssc::generate_constraints(truth, ml, cl, seed);
    }
    if (diameter || split) {
        if (data_path.empty())
            throw cmssc::ParseError("--diameter/--split need --data");
        cmssc::Dataset data = cmssc::io::read_dataset(data_path);
        cmssc::ConstraintSet geo = cmssc::translate_geometric(data, diameter, split);
        for (const auto& p : geo.ml) cons.ml.insert(p);
        for (const auto& p : geo.cl) cons.cl.insert(p);
    }
    cmssc::io::write_constraints(out_path, cons);
    return kExitOk;
}

int run_heuristic(const CommonArgs& args, double sdp_tol, const std::string& out_path) {
    auto [data, cons] = load_instance(args);
    cons = cmssc::infer_ml_for_k2(cons, args.k);
    cmssc::ReduceResult rr = cmssc::reduce(data, cons, args.k);

    ordered_json j;
    auto emit = [&](int code) {
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            out << j.dump(2) << "\n";
        } else {
            std::cout << j.dump(2) << "\n";
        }
        return code;
    };

    if (cmssc::is_infeasible(rr)) {
        j["feasible"] = false;
        j["reason"] = std::get<cmssc::Infeasibility>(rr).describe();
        return emit(kExitInfeasible);
    }
    const cmssc::ReducedInstance& red = std::get<cmssc::ReducedInstance>(rr);
    cmssc::FeasibilityResult feas = cmssc::check_feasible(red);
    if (!feas.feasible()) {
        j["feasible"] = false;
        j["reason"] = "no clustering satisfies the cannot-link constraints";
        return emit(kExitInfeasible);
    }

    cmssc::SdpModel model = cmssc::build_model(red);
    cmssc::SdpSolverConfig scfg;
    scfg.tol = sdp_tol;
    cmssc::SdpSolution sol = cmssc::solve(model, scfg);
    cmssc::Matrix init = cmssc::sdp_round_init(sol.z, red, args.seed);
    cmssc::HeuristicConfig hcfg;
    cmssc::IpcTrace trace;
    cmssc::AssignmentResult res = cmssc::ipc_kmeans(red, init, hcfg, &trace);
    if (std::holds_alternative<cmssc::Infeasibility>(res)) {
        j["feasible"] = false;
        j["reason"] = std::get<cmssc::Infeasibility>(res).describe();
        return emit(kExitInfeasible);
    }
    const cmssc::Assignment& a = std::get<cmssc::Assignment>(res);
    j["feasible"] = true;
    j["objective"] = a.objective;
    j["iterations"] = trace.iterations;
    j["assignment_proven_optimal"] = trace.assignment_proven_optimal;
    j["labels"] = red.expand_labels(a.labels);
    return emit(kExitOk);
}

int run_bound(const CommonArgs& args, const cmssc::BnbConfig& cfg) {
    auto [data, cons] = load_instance(args);
    cons = cmssc::infer_ml_for_k2(cons, args.k);
    cmssc::ReduceResult rr = cmssc::reduce(data, cons, args.k);
    ordered_json j;
    if (cmssc::is_infeasible(rr)) {
        j["feasible"] = false;
        j["reason"] = std::get<cmssc::Infeasibility>(rr).describe();
        std::cout << j.dump(2) << "\n";
        return kExitInfeasible;
    }
    const cmssc::ReducedInstance& red = std::get<cmssc::ReducedInstance>(rr);
    if (!cmssc::check_feasible(red).feasible()) {
        j["feasible"] = false;
        j["reason"] = "no clustering satisfies the cannot-link constraints";
        std::cout << j.dump(2) << "\n";
        return kExitInfeasible;
    }

    cmssc::CutPool pool;
    pool.violation_tol = cfg.violation_tol;
    pool.batch_cap = cfg.batch_cap;
    pool.keep_fraction = cfg.keep_fraction;
    cmssc::CpConfig cp_cfg;
    cp_cfg.max_rounds = cfg.root_max_rounds;
    cp_cfg.stall_tol = cfg.stall_tol;
    cp_cfg.activity_tol = cfg.activity_tol;
    cp_cfg.gap_tol = cfg.gap_tol;
    cp_cfg.seed = cfg.seed;
    cmssc::CpResult cp = cmssc::cutting_plane_loop(
        red, pool, cfg.sdp, cp_cfg, std::numeric_limits<double>::infinity());

    j["feasible"] = true;
    j["safe_lb"] = cp.certificate.safe_lb;
    j["rounds"] = cp.rounds;
    j["cuts"] = static_cast<int>(cp.pool.active.size());
    j["certificate"] = {{"s_tilde_min_eig", cp.certificate.s_tilde_min_eig},
                        {"clamped_v", cp.certificate.clamped_v},
                        {"clamped_cuts", cp.certificate.clamped_cuts},
                        {"z_bar", cp.certificate.z_bar}};
    j["rounds_log"] = ordered_json::array();
    for (const cmssc::CpRoundLog& r : cp.log)
        j["rounds_log"].push_back({{"round", r.round},
                                   {"pair", r.added_pair},
                                   {"triangle", r.added_triangle},
                                   {"clique", r.added_clique},
                                   {"purged", r.purged},
                                   {"cuts_in_model", r.cuts_in_model},
                                   {"safe_lb", r.safe_lb}});
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_evaluate(const std::string& data_path, const std::string& pred_path,
                 const std::string& truth_path) {
    cmssc::Dataset data = cmssc::io::read_dataset(data_path);
    std::vector<int> pred = cmssc::io::read_labels(pred_path);
    std::vector<int> truth = cmssc::io::read_labels(truth_path);
    ordered_json j;
    j["objective"] = cmssc::mssc_objective(data, pred);
    j["ari"] = cmssc::ari(truth, pred);
    j["ami"] = cmssc::ami(truth, pred);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_oracle(const CommonArgs& args) {
    auto [data, cons] = load_instance(args);
    cmssc::OracleOutcome outcome = cmssc::brute_force_solve(data, cons, args.k);
    ordered_json j;
    if (std::holds_alternative<cmssc::Infeasibility>(outcome)) {
        j["feasible"] = false;
        std::cout << j.dump(2) << "\n";
        return kExitInfeasible;
    }
    const cmssc::OracleResult& r = std::get<cmssc::OracleResult>(outcome);
    j["feasible"] = true;
    j["objective"] = r.objective;
    j["labels"] = r.labels;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified semi-supervised minimum sum-of-squares clustering"};
    app.require_subcommand(1);

    CommonArgs solve_args, heur_args, bound_args, oracle_args;
    cmssc::BnbConfig bnb_cfg;
    std::string out_path, node_log_path;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve to certified optimality");
    add_common(solve_cmd, solve_args);
    solve_cmd->add_option("--gap-tol", bnb_cfg.gap_tol, "relative optimality gap");
    solve_cmd->add_option("--max-nodes", bnb_cfg.max_nodes, "node limit");
    solve_cmd->add_option("--workers", bnb_cfg.workers, "worker threads (0 = auto)");
    solve_cmd->add_option("--sdp-tol", bnb_cfg.sdp.tol, "relative KKT tolerance");
    solve_cmd->add_option("--out", out_path, "result JSON path");
    solve_cmd->add_option("--node-log", node_log_path, "node log CSV path");

    std::string gen_labels, gen_data, gen_out;
    int gen_ml = 0, gen_cl = 0;
    std::uint64_t gen_seed = 0;
    double gen_diameter = 0.0, gen_split = 0.0;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a constraint file");
    gen_cmd->add_option("--labels", gen_labels, "ground-truth labels file");
    gen_cmd->add_option("--data", gen_data, "dataset CSV (for --diameter/--split)");
    gen_cmd->add_option("--ml", gen_ml, "number of must-link constraints");
    gen_cmd->add_option("--cl", gen_cl, "number of cannot-link constraints");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    CLI::Option* diam_opt = gen_cmd->add_option("--diameter", gen_diameter,
                                                "cannot-link all pairs farther apart");
    CLI::Option* split_opt = gen_cmd->add_option("--split", gen_split,
                                                 "must-link all pairs closer together");
    gen_cmd->add_option("--out", gen_out, "output constraint file")->required();

    double heur_tol = 1e-4;
    std::string heur_out;
    CLI::App* heur_cmd = app.add_subcommand("heuristic", "upper bound only");
    add_common(heur_cmd, heur_args);
    heur_cmd->add_option("--sdp-tol", heur_tol, "relative KKT tolerance");
    heur_cmd->add_option("--out", heur_out, "result JSON path");

    cmssc::BnbConfig bound_cfg;
    CLI::App* bound_cmd = app.add_subcommand("bound", "root safe lower bound only");
    add_common(bound_cmd, bound_args);
    bound_cmd->add_option("--sdp-tol", bound_cfg.sdp.tol, "relative KKT tolerance");
    bound_cmd->add_option("--max-rounds", bound_cfg.root_max_rounds, "cutting-plane rounds");

    std::string eval_data, eval_pred, eval_truth;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "objective, ARI, AMI");
    eval_cmd->add_option("--data", eval_data, "dataset CSV")->required();
    eval_cmd->add_option("--labels-pred", eval_pred, "predicted labels")->required();
    eval_cmd->add_option("--labels-true", eval_truth, "ground-truth labels")->required();

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "exhaustive reference solver");
    add_common(oracle_cmd, oracle_args);
    oracle_cmd->group("");  // test harness helper, hidden from --help

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            bnb_cfg.seed = solve_args.seed;
            return run_solve(solve_args, bnb_cfg, out_path, node_log_path);
        }
        if (gen_cmd->parsed()) {
            std::optional<double> diameter, split;
            if (diam_opt->count() > 0) diameter = gen_diameter;
            if (split_opt->count() > 0) split = gen_split;
            if (gen_labels.empty() && !diameter && !split)
                throw cmssc::ParseError("gen needs --labels or --diameter/--split");
            return run_gen(gen_labels, gen_data, gen_ml, gen_cl, gen_seed, diameter, split,
                           gen_out);
        }
        if (heur_cmd->parsed()) return run_heuristic(heur_args, heur_tol, heur_out);
        if (bound_cmd->parsed()) {
            bound_cfg.seed = bound_args.seed;
            return run_bound(bound_args, bound_cfg);
        }
        if (eval_cmd->parsed()) return run_evaluate(eval_data, eval_pred, eval_truth);
        if (oracle_cmd->parsed()) return run_oracle(oracle_args);
    } catch (const cmssc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
