#include "skor/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "skor/rng.hpp"

namespace skor {

const char* sketch_kind_name(SketchKind kind) {
  switch (kind) {
    case SketchKind::subsample:
      return "subsample";
    case SketchKind::gaussian:
      return "gaussian";
    case SketchKind::p_sr:
      return "p_sr";
    case SketchKind::p_sg:
      return "p_sg";
  }
  throw std::logic_error("sketch_kind_name: bad enum value");
}

SketchKind sketch_kind_from_name(const std::string& name) {
  if (name == "subsample") return SketchKind::subsample;
  if (name == "gaussian") return SketchKind::gaussian;
  if (name == "p_sr") return SketchKind::p_sr;
  if (name == "p_sg") return SketchKind::p_sg;
  throw std::invalid_argument("unknown sketch kind: " + name);
}

void SketchSpec::validate() const {
  if (m < 1) throw std::invalid_argument("sketch size m must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sketch sparsity p must lie in (0, 1]");
  }
}

const std::vector<Index>& SketchOperator::indices() const {
  if (storage_ != Storage::indices) {
    throw std::logic_error("indices() requires a sub-sample operator");
  }
  return indices_;
}

Matrix SketchOperator::apply_left(const MatrixRef& M) const {
  if (M.rows() != n_) {
    throw std::invalid_argument("sketch apply_left: M has " +
                                std::to_string(M.rows()) + " rows, expected " +
                                std::to_string(n_));
  }
  switch (storage_) {
    case Storage::indices: {
      Matrix out(m_, M.cols());
      for (Index i = 0; i < m_; ++i) out.row(i) = M.row(indices_[i]);
      return out;
    }
    case Storage::dense:
      return dense_ * M;
    case Storage::sparse:
      return sparse_ * M;
  }
  throw std::logic_error("sketch apply_left: bad storage");
}

Matrix SketchOperator::apply_adjoint(const MatrixRef& M) const {
  if (M.rows() != m_) {
    throw std::invalid_argument("sketch apply_adjoint: M has " +
                                std::to_string(M.rows()) + " rows, expected " +
                                std::to_string(m_));
  }
  switch (storage_) {
    case Storage::indices: {
      Matrix out = Matrix::Zero(n_, M.cols());
      for (Index i = 0; i < m_; ++i) out.row(indices_[i]) += M.row(i);
      return out;
    }
    case Storage::dense:
      return dense_.transpose() * M;
    case Storage::sparse:
      return sparse_.transpose() * M;
  }
  throw std::logic_error("sketch apply_adjoint: bad storage");
}

Matrix SketchOperator::to_dense() const {
  switch (storage_) {
    case Storage::indices: {
      Matrix out = Matrix::Zero(m_, n_);
      for (Index i = 0; i < m_; ++i) out(i, indices_[i]) = 1.0;
      return out;
    }
    case Storage::dense:
      return dense_;
    case Storage::sparse:
      return Matrix(sparse_);
  }
  throw std::logic_error("sketch to_dense: bad storage");
}

SketchOperator SketchOperator::from_indices(std::vector<Index> indices, Index n) {
  if (indices.empty()) throw std::invalid_argument("sketch needs >= 1 index");
  std::vector<Index> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= n) {
    throw std::invalid_argument("sketch index out of range [0, n)");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("sketch indices must be distinct");
  }
  SketchOperator op;
  op.m_ = static_cast<Index>(indices.size());
  op.n_ = n;
  op.indices_ = std::move(indices);
  op.storage_ = Storage::indices;
  return op;
}

SketchOperator SketchOperator::from_dense(Matrix R) {
  if (R.rows() < 1 || R.cols() < 1) {
    throw std::invalid_argument("sketch matrix must be nonempty");
  }
  if (!R.allFinite()) throw std::invalid_argument("sketch matrix must be finite");
  SketchOperator op;
  op.m_ = R.rows();
  op.n_ = R.cols();
  op.dense_ = std::move(R);
  op.storage_ = Storage::dense;
  return op;
}

SketchOperator draw(const SketchSpec& spec, Index n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("draw: n must be >= 1");

  RngStream rng(spec.seed);
  SketchOperator op;
  op.m_ = spec.m;
  op.n_ = n;
  op.spec_ = spec;

  switch (spec.kind) {
    case SketchKind::subsample: {
      if (spec.m > n) {
        throw std::invalid_argument("sub-sample sketch requires m <= n");
      }
      // Partial Fisher-Yates: the first m entries of the shuffle are the
      // sample. With one seed this makes draws prefix-nested across sizes,
      // which the nested-anchor diagnostics rely on.
      std::vector<Index> pool(static_cast<std::size_t>(n));
      std::iota(pool.begin(), pool.end(), Index{0});
      for (Index i = 0; i < spec.m; ++i) {
        const Index j =
            i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      pool.resize(static_cast<std::size_t>(spec.m));
      op.indices_ = std::move(pool);
      op.storage_ = SketchOperator::Storage::indices;
      break;
    }
    case SketchKind::gaussian: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
      op.dense_.resize(spec.m, n);
      for (Index i = 0; i < spec.m; ++i) {
        for (Index j = 0; j < n; ++j) op.dense_(i, j) = scale * rng.next_normal();
      }
      op.storage_ = SketchOperator::Storage::dense;
      break;
    }
    case SketchKind::p_sr:
    case SketchKind::p_sg: {
      const double scale =
          1.0 / std::sqrt(static_cast<double>(spec.m) * spec.p);
      std::vector<Eigen::Triplet<double>> entries;
      entries.reserve(static_cast<std::size_t>(
          spec.p * static_cast<double>(spec.m) * static_cast<double>(n) * 1.2 + 16));
      for (Index i = 0; i < spec.m; ++i) {
        for (Index j = 0; j < n; ++j) {
          if (rng.next_unit() >= spec.p) continue;  // Bernoulli(p) gate
          const double s = spec.kind == SketchKind::p_sr
                               ? (rng.next_u64() >> 63 ? 1.0 : -1.0)
                               : rng.next_normal();
          entries.emplace_back(static_cast<int>(i), static_cast<int>(j), scale * s);
        }
      }
      op.sparse_.resize(spec.m, n);
      op.sparse_.setFromTriplets(entries.begin(), entries.end());
      op.sparse_.makeCompressed();
      op.storage_ = SketchOperator::Storage::sparse;
      break;
    }
  }
  return op;
}

Matrix apply_left(const SketchOperator& R, const MatrixRef& M) {
  return R.apply_left(M);
}

Matrix sketch_gram(const SketchOperator& R, const GramMatrix& K) {
  if (K.rows() != K.cols()) {
    throw std::invalid_argument("sketch_gram: Gram must be square");
  }
  if (R.cols() != K.rows()) {
    throw std::invalid_argument("sketch_gram: sketch has " +
                                std::to_string(R.cols()) +
                                " columns, Gram has " +
                                std::to_string(K.rows()) + " rows");
  }
  if (R.is_subsample()) {
    const auto& idx = R.indices();
    const Index m = R.rows();
    Matrix out(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) out(i, j) = K.values(idx[i], idx[j]);
    }
    return 0.5 * (out + out.transpose());
  }
  const Matrix RK = R.apply_left(K.values);         // m x n
  const Matrix B = R.apply_left(RK.transpose());    // m x m, equals R K^T R^T
  return 0.5 * (B + B.transpose());
}

}  // namespace skor
