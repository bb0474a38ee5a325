#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "numkit/dense.hpp"

namespace numkit::linalg {

/// In-place Cholesky of a symmetric matrix; on success the lower triangle
/// holds L with A = L L^T (upper triangle is left untouched).
/// Returns false when the matrix is not positive definite.
bool cholesky_factor(DenseMatrix& a);

/// Solve A x = b given the lower Cholesky factor from cholesky_factor.
Vector cholesky_solve(const DenseMatrix& chol_lower, Vector b);

/// Solve A x = b by LU with partial pivoting. Throws SingularMatrixError.
Vector solve_lu(DenseMatrix a, Vector b);

Vector forward_substitute(const DenseMatrix& lower, Vector b);
Vector back_substitute_transposed(const DenseMatrix& lower, Vector b);  // solves L^T x = b

/// Thomas algorithm. sub/sup have length n-1, diag and rhs length n.
Vector solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                         std::span<const double> sup, Vector rhs);

/// Householder QR with column pivoting: A P = Q R.
/// `qr` stores R in its upper triangle and the Householder vectors below the
/// diagonal; `perm[j]` is the original column placed at position j.
struct PivotedQr {
    DenseMatrix qr;
    Vector tau;
    std::vector<std::size_t> perm;
    std::size_t rank = 0;

    double r(std::size_t i, std::size_t j) const { return i <= j ? qr(i, j) : 0.0; }

    /// Solve R[0:rank,0:rank] x = R[0:rank, col] for a dependent column.
    Vector solve_r_leading(std::size_t col) const;
};

PivotedQr qr_column_pivoted(DenseMatrix a, double rel_tol = 0.0);

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Eigenvalues ascending; vectors stored as columns of `vectors`.
struct SymmetricEigen {
    Vector values;
    DenseMatrix vectors;
};

SymmetricEigen eigh(const DenseMatrix& a);

/// All complex roots of a real polynomial given coefficients from the highest
/// power down. Degree <= 2 uses closed forms; higher degrees go through the
/// companion matrix and a shifted complex Hessenberg QR iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs_high_first);

}  // namespace numkit::linalg
