#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmssc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexPair = std::pair<int, int>;

inline IndexPair make_pair_sorted(int i, int j) {
    return i < j ? IndexPair{i, j} : IndexPair{j, i};
}

// Points as rows of an n x d matrix.
struct Dataset {
    Matrix points;

    int n() const { return static_cast<int>(points.rows()); }
    int d() const { return static_cast<int>(points.cols()); }
    void validate() const;
};

// Unordered must-link / cannot-link pairs over point indices.
struct ConstraintSet {
    std::set<IndexPair> ml;
    std::set<IndexPair> cl;

    void add_ml(int i, int j);
    void add_cl(int i, int j);
    void validate(int n) const;
    bool empty() const { return ml.empty() && cl.empty(); }
};

struct GroundTruth {
    std::vector<int> labels;

    int n() const { return static_cast<int>(labels.size()); }
    int n_classes() const;
    void validate() const;
};

// Why a constraint system admits no clustering.
struct Infeasibility {
    enum class Kind { ClWithinComponent, TooFewSuperPoints, NoColoring };
    Kind kind = Kind::NoColoring;
    IndexPair witness{-1, -1};

    std::string describe() const;
};

struct NumericalBreakdown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCluster : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cmssc
