#include "cmssc/kernels.hpp"

#include <omp.h>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cmssc::kernels {

namespace {

// below this size the OpenMP fork/join overhead dominates
constexpr int kParallelCutoff = 128;

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NumericalBreakdown(std::string(what) + ": non-finite input");
}

Eigen::SelfAdjointEigenSolver<Matrix> eig_decompose(const Matrix& sym) {
    require_finite(sym, "eigendecomposition");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
        throw NumericalBreakdown("symmetric eigendecomposition failed to converge");
    return es;
}

// P = B * B^T from the positive spectral part, filling the upper triangle
// row by row and mirroring.
Matrix gram_of_rows_serial(const Matrix& b, int n) {
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = b.row(i).dot(b.row(j));
            p(i, j) = v;
            p(j, i) = v;
        }
    }
    return p;
}

Matrix gram_of_rows_omp(const Matrix& b, int n) {
    Matrix p(n, n);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = b.row(i).dot(b.row(j));
            p(i, j) = v;
            p(j, i) = v;
        }
    }
    return p;
}

}  // namespace

Matrix gram_serial(const Matrix& points) {
    return gram_of_rows_serial(points, static_cast<int>(points.rows()));
}

Matrix gram_omp(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    Matrix p(n, n);
    // row-owned writes; with thin rows the duplicated dot products cost
    // less than mirrored cross-thread stores
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = points.row(i).dot(points.row(j));
    return p;
}

Matrix gram(const Matrix& points) {
    return points.rows() < kParallelCutoff ? gram_serial(points) : gram_omp(points);
}

Matrix pairwise_sq_dists_serial(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double v = (points.row(i) - points.row(j)).squaredNorm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

Matrix pairwise_sq_dists_omp(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    Matrix d(n, n);
    // each thread fills whole rows; the duplicated flops beat the false
    // sharing a mirrored triangle write causes
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            d(i, j) = (points.row(i) - points.row(j)).squaredNorm();
        }
    }
    return d;
}

Matrix pairwise_sq_dists(const Matrix& points) {
    return points.rows() < kParallelCutoff ? pairwise_sq_dists_serial(points)
                                           : pairwise_sq_dists_omp(points);
}

Matrix psd_project_serial(const Matrix& sym, Vector* evals) {
    auto es = eig_decompose(sym);
    if (evals) *evals = es.eigenvalues();
    const Vector& lam = es.eigenvalues();
    const int n = static_cast<int>(sym.rows());
    int first_pos = 0;
    while (first_pos < n && lam(first_pos) <= 0.0) ++first_pos;
    if (first_pos == n) return Matrix::Zero(n, n);
    const int r = n - first_pos;
    Matrix b = es.eigenvectors().rightCols(r);
    for (int c = 0; c < r; ++c) b.col(c) *= std::sqrt(lam(first_pos + c));
    return gram_of_rows_serial(b, n);
}

Matrix psd_project_omp(const Matrix& sym, Vector* evals) {
    auto es = eig_decompose(sym);
    if (evals) *evals = es.eigenvalues();
    const Vector& lam = es.eigenvalues();
    const int n = static_cast<int>(sym.rows());
    int first_pos = 0;
    while (first_pos < n && lam(first_pos) <= 0.0) ++first_pos;
    if (first_pos == n) return Matrix::Zero(n, n);
    const int r = n - first_pos;
    Matrix b = es.eigenvectors().rightCols(r);
    for (int c = 0; c < r; ++c) b.col(c) *= std::sqrt(lam(first_pos + c));
    return gram_of_rows_omp(b, n);
}

Matrix psd_project(const Matrix& sym, Vector* evals) {
    return sym.rows() < kParallelCutoff ? psd_project_serial(sym, evals)
                                        : psd_project_omp(sym, evals);
}

Vector sym_eigenvalues(const Matrix& sym) {
    require_finite(sym, "eigenvalues");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalBreakdown("symmetric eigendecomposition failed to converge");
    return es.eigenvalues();
}

}  // namespace cmssc::kernels
