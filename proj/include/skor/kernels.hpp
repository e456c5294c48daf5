#pragma once

#include <string>

#include "skor/types.hpp"

namespace skor {

enum class KernelKind { gaussian, linear, tanimoto_gaussian, precomputed };

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

/// Scalar kernel description. Width-parameterized kinds require
/// sigma2 > 0; precomputed carries no parameters (Gram values are
/// ingested from files instead of being evaluated).
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double sigma2 = 1.0;

  static KernelSpec gaussian(double sigma2);
  static KernelSpec linear();
  static KernelSpec tanimoto_gaussian(double sigma2);
  static KernelSpec precomputed();

  void validate() const;
};

/// Kernel evaluations between two sample sets, rows vs columns.
/// Square self-Grams are symmetrized at construction ((M + M^T)/2) so
/// downstream eigen-solvers see exact symmetry, and cache their diagonal.
struct GramMatrix {
  Matrix values;
  bool symmetric = false;
  Vector diag;  // filled for square matrices

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  static GramMatrix from_values(Matrix values, bool symmetric);
};

/// k(a, b) for the given spec. Rejects dimension mismatches, precomputed
/// specs, and (for tanimoto_gaussian) all-zero vectors, whose Tanimoto
/// self-similarity is undefined.
double eval_kernel(const KernelSpec& spec, const VectorRef& a, const VectorRef& b);

/// Cross-Gram between row-sample matrices A (n x d) and B (n' x d).
Matrix cross_gram(const KernelSpec& spec, const MatrixRef& A, const MatrixRef& B);

/// values[i][j] = k(A.row(i), B.row(j)).
GramMatrix gram(const KernelSpec& spec, const MatrixRef& A, const MatrixRef& B);

/// Symmetric self-Gram of A.
GramMatrix gram(const KernelSpec& spec, const MatrixRef& A);

}  // namespace skor
