#pragma once

#include <vector>

#include "projangles/matrix.hpp"

namespace pa {

// Relative singular-value threshold used by every rank decision in the
// library (single global policy).
inline constexpr double kRankRelTol = 1e-8;

struct SymEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // orthonormal columns, vectors.col(k) pairs with values[k]
};

// Cyclic Jacobi eigensolve for a symmetric matrix. Deterministic: fixed sweep
// order, eigenvalues sorted ascending, each eigenvector's largest-magnitude
// entry made positive.
SymEigen sym_eigen(const Matrix& a);

struct Svd {
    Matrix u;                   // rows x rows, orthonormal columns
    std::vector<double> sigma;  // min(rows, cols) values, descending
    Matrix v;                   // cols x cols, orthonormal columns
};

// SVD computed from the eigendecomposition of A^T A (A A^T when rows < cols),
// singular values re-evaluated as ||A v_i|| and U completed to a full basis.
Svd svd(const Matrix& a);

std::size_t rank(const Svd& s);
std::size_t rank(const Matrix& a);

double spectral_norm(const Matrix& a);  // largest singular value
double cond2(const Matrix& a);          // s_1 / s_min, +inf when rank deficient

// Orthonormal basis of the column span / right null space.
Matrix image_basis(const Matrix& a);
Matrix kernel_basis(const Matrix& a);

// Orthonormal basis of the intersection span(u) and span(v); inputs must have
// orthonormal columns. Empty inputs yield an empty basis.
Matrix intersect_subspaces(const Matrix& u, const Matrix& v);
Matrix intersect_subspaces(const std::vector<Matrix>& bases);

// Residual of the least-squares projection of x onto span(basis) (orthonormal
// columns), as a fraction of ||x||.
double subspace_residual(const Matrix& basis, const Matrix& x);

// Gaussian elimination with partial pivoting; throws on (numerically)
// singular systems.
Matrix solve(const Matrix& a, const Matrix& rhs);
Matrix inverse(const Matrix& a);

}  // namespace pa
