#include "cmssc/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cmssc::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool has_comma = line.find(',') != std::string::npos;
    std::istringstream ss(line);
    if (has_comma) {
        while (std::getline(ss, cur, ',')) fields.push_back(cur);
    } else {
        while (ss >> cur) fields.push_back(cur);
    }
    return fields;
}

bool parse_double(const std::string& raw, double& out) {
    std::string s = raw;
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");

    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool first_content = true;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields = split_fields(line);
        std::vector<double> vals(fields.size());
        bool numeric = true;
        for (size_t c = 0; c < fields.size(); ++c)
            if (!parse_double(fields[c], vals[c])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (first_content) {  // header row
                first_content = false;
                continue;
            }
            fail(path, lineno, "non-numeric value");
        }
        first_content = false;
        if (width == 0) width = vals.size();
        if (vals.size() != width) fail(path, lineno, "inconsistent column count");
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");

    Dataset data;
    data.points = Matrix(static_cast<int>(rows.size()), static_cast<int>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            data.points(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    data.validate();
    return data;
}

ConstraintSet read_constraints(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");

    ConstraintSet cons;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        long i = -1, j = -1;
        if (!(ss >> i >> j)) fail(path, lineno, "expected two indices");
        std::string rest;
        if (ss >> rest) fail(path, lineno, "trailing tokens");
        if (i < 0 || j < 0 || i >= n || j >= n)
            fail(path, lineno, "index out of range for n=" + std::to_string(n));
        if (i == j) fail(path, lineno, "constraint needs two distinct points");
        if (kind == "ML")
            cons.add_ml(static_cast<int>(i), static_cast<int>(j));
        else if (kind == "CL")
            cons.add_cl(static_cast<int>(i), static_cast<int>(j));
        else
            fail(path, lineno, "unknown constraint kind '" + kind + "'");
    }
    return cons;
}

void write_constraints(const std::string& path, const ConstraintSet& cons) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (const auto& [i, j] : cons.ml) out << "ML " << i << " " << j << "\n";
    for (const auto& [i, j] : cons.cl) out << "CL " << i << " " << j << "\n";
}

std::vector<int> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::vector<int> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        long v;
        if (!(ss >> v)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            fail(path, lineno, "expected an integer label");
        }
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty()) throw ParseError(path + ": no labels");
    return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (int v : labels) out << v << "\n";
}

std::string result_to_json(const SolveResult& result) {
    ordered_json j;
    j["schema"] = 1;
    switch (result.status) {
        case SolveStatus::Optimal: j["status"] = "optimal"; break;
        case SolveStatus::NodeLimit: j["status"] = "node_limit"; break;
        case SolveStatus::Infeasible: j["status"] = "infeasible"; break;
    }
    if (result.status == SolveStatus::Infeasible) {
        j["objective"] = nullptr;
        j["labels"] = nullptr;
    } else {
        j["objective"] = result.upper_bound;
        j["labels"] = result.best_labels.value_or(std::vector<int>{});
    }
    j["upper_bound"] = std::isfinite(result.upper_bound) ? json(result.upper_bound) : json(nullptr);
    j["lower_bound"] = std::isfinite(result.lower_bound) ? json(result.lower_bound) : json(nullptr);
    j["gap"] = result.gap;
    j["nodes"] = result.nodes_explored;
    j["root"] = {{"cp_rounds", result.root.cp_rounds},
                 {"inequalities", result.root.inequalities},
                 {"gap", result.root.gap},
                 {"time_sec", result.root.time_sec}};
    j["wall_time_sec"] = result.wall_time_sec;
    return j.dump(2) + "\n";
}

void write_result_json(const std::string& path, const SolveResult& result) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << result_to_json(result);
}

void write_node_log_csv(const std::string& path, const std::vector<NodeLogRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << "id,parent,depth,size,rounds,cuts,safe_lb,ub,gap,time_sec,cert_min_eig,"
           "cert_clamped,action\n";
    out.precision(12);
    for (const NodeLogRow& r : rows) {
        out << r.id << "," << r.parent << "," << r.depth << "," << r.size << "," << r.rounds
            << "," << r.cuts << ",";
        if (std::isfinite(r.safe_lb)) out << r.safe_lb;
        else out << "inf";
        out << ",";
        if (std::isfinite(r.ub)) out << r.ub;
        else out << "inf";
        out << "," << r.gap << "," << r.time_sec << "," << r.cert_min_eig << ","
            << r.cert_clamped << "," << r.action << "\n";
    }
}

}  // namespace cmssc::io
