#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "skor/kernels.hpp"
#include "skor/types.hpp"

namespace skor {

enum class SketchKind { subsample, gaussian, p_sr, p_sg };

const char* sketch_kind_name(SketchKind kind);
SketchKind sketch_kind_from_name(const std::string& name);

/// Description of a random m x n sketch matrix R.
///
///   subsample  rows drawn without replacement from the rows of I_n
///   gaussian   entries i.i.d. N(0, 1/m)
///   p_sr       entries b*s/sqrt(m*p), b ~ Bernoulli(p), s Rademacher
///   p_sg       entries b*s/sqrt(m*p), b ~ Bernoulli(p), s ~ N(0,1)
///
/// p_sr/p_sg entries have mean 0 and variance exactly 1/m; rows that come
/// out all-zero are kept (pseudo-inverses downstream absorb the rank
/// deficiency). Drawing is a pure function of (spec, n): the stream is
/// consumed entry by entry in row-major order, so equal seeds reproduce
/// the operator bit-for-bit.
struct SketchSpec {
  SketchKind kind = SketchKind::subsample;
  Index m = 0;
  double p = 1.0;           // sparsity, p_sr/p_sg only
  std::uint64_t seed = 0;

  void validate() const;
};

/// A drawn sketch matrix with a kind-specialized representation:
/// index list (subsample), dense m x n (gaussian), or sparse row-major
/// m x n (p_sr/p_sg).
class SketchOperator {
 public:
  Index rows() const { return m_; }
  Index cols() const { return n_; }

  /// Spec the operator was drawn from; absent for from_dense operators.
  const std::optional<SketchSpec>& spec() const { return spec_; }

  bool is_subsample() const { return storage_ == Storage::indices; }
  const std::vector<Index>& indices() const;

  /// R * M. Subsampling is a row gather; sparse kinds use a
  /// sparse-dense product.
  Matrix apply_left(const MatrixRef& M) const;

  /// R^T * M (scatter for subsampling).
  Matrix apply_adjoint(const MatrixRef& M) const;

  /// Materialize R; intended for tests and small diagnostics.
  Matrix to_dense() const;

  /// Rebuild a subsample operator from stored indices.
  static SketchOperator from_indices(std::vector<Index> indices, Index n);
  /// Wrap an explicit matrix as a sketch; not serializable.
  static SketchOperator from_dense(Matrix R);

  friend SketchOperator draw(const SketchSpec& spec, Index n);

 private:
  SketchOperator() = default;

  Index m_ = 0, n_ = 0;
  std::optional<SketchSpec> spec_;
  std::vector<Index> indices_;                      // subsample
  Matrix dense_;                                    // gaussian / from_dense
  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse_;  // p_sr / p_sg
  enum class Storage { indices, dense, sparse } storage_ = Storage::indices;
};

/// Draw R from spec for n columns. Deterministic per (spec, n).
/// Subsampling draws are prefix-nested: with one seed, the index list for
/// size m is the first m entries of the list for any larger size.
SketchOperator draw(const SketchSpec& spec, Index n);

/// R * M.
Matrix apply_left(const SketchOperator& R, const MatrixRef& M);

/// R K R^T, symmetrized. For subsampling this is the principal submatrix
/// of K at the sampled indices.
Matrix sketch_gram(const SketchOperator& R, const GramMatrix& K);

}  // namespace skor
