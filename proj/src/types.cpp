#include "cmssc/types.hpp"

#include <cmath>

namespace cmssc {

void Dataset::validate() const {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::invalid_argument("dataset needs at least one point and one coordinate");
    if (!points.allFinite())
        throw std::invalid_argument("dataset has non-finite coordinates");
}

void ConstraintSet::add_ml(int i, int j) {
    if (i == j) throw std::invalid_argument("constraint pair with equal indices");
    ml.insert(make_pair_sorted(i, j));
}

void ConstraintSet::add_cl(int i, int j) {
    if (i == j) throw std::invalid_argument("constraint pair with equal indices");
    cl.insert(make_pair_sorted(i, j));
}

void ConstraintSet::validate(int n) const {
    auto check = [n](const std::set<IndexPair>& pairs, const char* what) {
        for (const auto& [i, j] : pairs) {
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw std::invalid_argument(std::string(what) + " constraint index out of range");
            if (i == j)
                throw std::invalid_argument(std::string(what) + " constraint with equal indices");
        }
    };
    check(ml, "ML");
    check(cl, "CL");
}

int GroundTruth::n_classes() const {
    int k = 0;
    for (int v : labels) k = std::max(k, v + 1);
    return k;
}

void GroundTruth::validate() const {
    for (int v : labels)
        if (v < 0) throw std::invalid_argument("negative class label");
}

std::string Infeasibility::describe() const {
    switch (kind) {
        case Kind::ClWithinComponent:
            return "cannot-link pair (" + std::to_string(witness.first) + ", " +
                   std::to_string(witness.second) + ") falls inside one must-link component";
        case Kind::TooFewSuperPoints:
            return "fewer super points than clusters";
        case Kind::NoColoring:
            return "no assignment satisfies the cannot-link constraints";
    }
    return "infeasible";
}

}  // namespace cmssc
