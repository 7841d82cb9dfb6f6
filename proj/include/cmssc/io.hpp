#pragma once

#include <string>

#include "cmssc/bnb.hpp"
#include "cmssc/types.hpp"

namespace cmssc::io {

// CSV, one point per row. A non-numeric first row is treated as a header.
Dataset read_dataset(const std::string& path);

// One constraint per line: "ML i j" or "CL i j", 0-based, '#' comments.
ConstraintSet read_constraints(const std::string& path, int n);
void write_constraints(const std::string& path, const ConstraintSet& cons);

// One integer label per line.
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

// Result JSON, schema 1. Timing fields are "wall_time_sec" and
// root.time_sec; everything else is deterministic for a fixed seed in
// single-worker mode.
std::string result_to_json(const SolveResult& result);
void write_result_json(const std::string& path, const SolveResult& result);

void write_node_log_csv(const std::string& path,
                        const std::vector<NodeLogRow>& rows);

}  // namespace cmssc::io
