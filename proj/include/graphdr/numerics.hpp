#pragma once

#include <vector>

#include "graphdr/dense_matrix.hpp"

namespace graphdr {

/// Full spectrum of a symmetric matrix. values[j] pairs with the j-th
/// column of vectors; eigenvalues are sorted ascending.
struct EigenDecomposition {
    std::vector<double> values;
    DenseMatrix vectors;
};

struct ThinSvd {
    DenseMatrix u;               // rows x k
    std::vector<double> s;       // k singular values, nonincreasing
    DenseMatrix v;               // cols x k
};

// c = a * b with a fixed row-major accumulation order.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix (n <= 5000).
// Iteration cap 100 sweeps, off-diagonal tolerance 1e-12 relative to ||A||_F.
EigenDecomposition symmetric_eig(const DenseMatrix& a);

// Top-k singular triples via the eigendecomposition of the smaller Gram
// matrix (A^T A or A A^T).
ThinSvd svd_thin(const DenseMatrix& a, std::size_t k);

// (A + eps*I)^{-1/2} for a small (dim <= 16) symmetric PSD matrix,
// computed by direct eigendecomposition.
DenseMatrix spd_inverse_sqrt_small(const DenseMatrix& a, double eps);

// Squared Euclidean distances between the rows of x, expanded form with
// tiny negatives clamped to exactly 0. Symmetric, zero diagonal.
DenseMatrix pairwise_sq_distances(const DenseMatrix& x);

// Solve A X = B by LU with partial pivoting; throws SingularityError when
// a pivot vanishes to working precision.
DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace graphdr
