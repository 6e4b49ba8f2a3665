#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "cqr/matrix.hpp"

/// Dense symmetric kernels. Everything here is deterministic: identical
/// inputs produce bitwise-identical outputs within one build.
namespace cqr::linalg {

inline constexpr double kDefaultTolNull = 1e-8;

struct EigenDecomp {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, matching `values`
};

struct CholeskyResult {
  Matrix factor;  // lower triangular, valid only when ok()
  std::optional<std::size_t> failed_pivot;  // 1-based index of the bad pivot

  bool ok() const noexcept { return !failed_pivot.has_value(); }
};

struct NullspaceBasis {
  Matrix basis;  // orthonormal columns spanning the right nullspace
  std::size_t rank = 0;
};

struct Svd {
  Vector values;  // descending
  Matrix u;       // rows x k
  Matrix v;       // cols x k
};

struct MinNormSolution {
  Vector x;
  double residual = 0.0;
  bool consistent = false;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// Eigenvector signs are fixed so the largest-magnitude entry is positive.
/// Throws InputError on non-symmetric input, NumericalError when the QL
/// sweep cap (30 n) is exceeded.
EigenDecomp sym_eigen(const Matrix& a);

/// Eigenvalues only (ascending); cheaper than sym_eigen.
Vector sym_eigenvalues(const Matrix& a);

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the
/// given diagonal and sub-diagonal (`off[i]` couples i and i+1).
Vector tridiagonal_eigenvalues(Vector diag, Vector off);

CholeskyResult cholesky(const Matrix& a);

double min_psd_eig(const Matrix& a);

/// One-sided Jacobi SVD; returns min(rows, cols) triplets.
Svd svd(const Matrix& a);

NullspaceBasis nullspace(const Matrix& a, double tol_null = kDefaultTolNull);

/// Minimum-norm least-squares solution via the SVD with singular values
/// below tol_null * sigma_max discarded. `consistent` records whether
/// |Ax - b| <= tol_consistency * (|A| |x| + |b|).
MinNormSolution min_norm_lstsq(const Matrix& a, std::span<const double> b,
                               double tol_null = kDefaultTolNull,
                               double tol_consistency = kDefaultTolNull);

/// Minimum-norm solution of Ax = b, or nullopt when the system is
/// inconsistent at tolerance tol_null.
std::optional<Vector> min_norm_solve(const Matrix& a, std::span<const double> b,
                                     double tol_null = kDefaultTolNull);

/// Solves L y = b (forward) and L^T x = y (backward) in place.
void solve_lower(const Matrix& l, std::span<double> b);
void solve_lower_transposed(const Matrix& l, std::span<double> b);
/// x = A^{-1} b given the Cholesky factor of A.
Vector cholesky_solve(const Matrix& l, std::span<const double> b);
/// A^{-1} given the Cholesky factor of A.
Matrix cholesky_inverse(const Matrix& l);
/// L^{-1} M L^{-T} for symmetric M.
Matrix congruence_inverse(const Matrix& l, const Matrix& m);

/// Largest t in (0, cap] with A + t D positive semidefinite, where A is given
/// by its Cholesky factor. Returns `cap` when the whole segment is feasible.
double max_psd_step(const Matrix& chol_a, const Matrix& d, double cap);

/// Extreme eigenvalue estimate of a symmetric operator by Lanczos with full
/// reorthogonalization. Returns the largest Ritz value.
double lanczos_max_eigenvalue(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::size_t n, std::size_t steps);

}  // namespace cqr::linalg
