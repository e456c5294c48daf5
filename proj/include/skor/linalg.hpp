#pragma once

#include "skor/types.hpp"

namespace skor {

struct SolveOptions {
  /// Relative eigenvalue cutoff for pseudo-inverses.
  double pinv_rtol = 1e-10;
  /// Diagonal boost used when the Cholesky factorization of A + shift*I
  /// fails; 0 selects 1e-12 * trace(A)/q automatically.
  double jitter = 0.0;

  void validate() const;
};

/// Solves (A + shift*I) X = B for symmetric PSD A via Cholesky, with one
/// jittered retry. Throws on failure, reporting a condition estimate.
Matrix reg_solve(const MatrixRef& A, double shift, const MatrixRef& B,
                 const SolveOptions& opts = {});

/// Moore-Penrose inverse of a symmetric matrix through its
/// eigendecomposition: eigenvalues with |l| <= rtol * max|l| are dropped.
/// The result is symmetrized.
Matrix sym_pinv(const MatrixRef& A, double rtol = 1e-10);

}  // namespace skor
