#pragma once

#include "cmssc/types.hpp"

// Dense kernels on the hot path. Every kernel has a serial reference
// implementation and an OpenMP variant; the dispatcher picks by size.
// The two variants must agree to floating-point roundoff, which the
// kernel tests assert.
namespace cmssc::kernels {

Matrix gram_serial(const Matrix& points);
Matrix gram_omp(const Matrix& points);
Matrix gram(const Matrix& points);

Matrix pairwise_sq_dists_serial(const Matrix& points);
Matrix pairwise_sq_dists_omp(const Matrix& points);
Matrix pairwise_sq_dists(const Matrix& points);

// Projection onto the PSD cone via symmetric eigendecomposition.
// Optionally reports the eigenvalues of the input.
Matrix psd_project_serial(const Matrix& sym, Vector* evals = nullptr);
Matrix psd_project_omp(const Matrix& sym, Vector* evals = nullptr);
Matrix psd_project(const Matrix& sym, Vector* evals = nullptr);

// Eigenvalues of a symmetric matrix, ascending. Throws NumericalBreakdown
// on non-finite input or solver failure.
Vector sym_eigenvalues(const Matrix& sym);

}  // namespace cmssc::kernels
