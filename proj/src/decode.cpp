#include "skor/decode.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace skor {

void CandidateSet::validate(Index n_train) const {
  if (diag.size() == 0) throw std::invalid_argument("empty candidate set");
  if (cross_gram.rows() != n_train) {
    throw std::invalid_argument("candidate cross-Gram has " +
                                std::to_string(cross_gram.rows()) +
                                " rows, expected n_train=" +
                                std::to_string(n_train));
  }
  if (cross_gram.cols() != diag.size()) {
    throw std::invalid_argument(
        "candidate cross-Gram columns and diag length differ");
  }
  if (!cross_gram.allFinite() || !diag.allFinite()) {
    throw std::invalid_argument("candidate set has non-finite entries");
  }
  if (diag.minCoeff() < 0.0) {
    throw std::invalid_argument("candidate diag entries must be >= 0");
  }
  if (!labels.empty() && static_cast<Index>(labels.size()) != diag.size()) {
    throw std::invalid_argument("candidate labels length mismatch");
  }
}

Matrix score_matrix(const FittedModel& model, const MatrixRef& K_test_train,
                    const CandidateSet& cand) {
  cand.validate(model.n_train);
  if (K_test_train.cols() != model.n_train) {
    throw std::invalid_argument("score_matrix: cross-Gram has " +
                                std::to_string(K_test_train.cols()) +
                                " columns, expected " +
                                std::to_string(model.n_train));
  }
  // Chains keep every intermediate at sketch scale: the sketches hit the
  // Grams before anything multiplies through the core.
  switch (model.variant) {
    case Variant::iokr:
      return (K_test_train * model.core) * cand.cross_gram;
    case Variant::siokr: {
      const Matrix T1 =
          model.input_sketch->apply_left(K_test_train.transpose()).transpose();
      return T1 * (model.core.transpose() * cand.cross_gram);
    }
    case Variant::isokr: {
      const Matrix right = model.output_sketch->apply_left(cand.cross_gram);
      return (K_test_train * model.core.transpose()) * right;
    }
    case Variant::sisokr: {
      const Matrix T1 =
          model.input_sketch->apply_left(K_test_train.transpose()).transpose();
      const Matrix right = model.output_sketch->apply_left(cand.cross_gram);
      return T1 * model.core * right;
    }
  }
  throw std::logic_error("score_matrix: bad variant");
}

std::vector<Prediction> decode_scores(const MatrixRef& scores,
                                      const CandidateSet& cand, Index k) {
  const Index n_c = cand.size();
  if (n_c == 0) throw std::invalid_argument("empty candidate set");
  if (scores.cols() != n_c) {
    throw std::invalid_argument("decode: score columns and candidate count differ");
  }
  if (k < 1 || k > n_c) {
    throw std::invalid_argument("decode: k must lie in [1, n_candidates]");
  }

  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(scores.rows()));
  std::vector<Index> order(static_cast<std::size_t>(n_c));
  for (Index t = 0; t < scores.rows(); ++t) {
    const Vector objective = cand.diag - 2.0 * scores.row(t).transpose();
    std::iota(order.begin(), order.end(), Index{0});
    // Ties resolve toward the smaller candidate index.
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Index a, Index b) {
                        if (objective[a] != objective[b]) {
                          return objective[a] < objective[b];
                        }
                        return a < b;
                      });
    Prediction p;
    p.index = order.front();
    p.score = objective[p.index];
    p.topk.assign(order.begin(), order.begin() + k);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> decode(const FittedModel& model,
                               const MatrixRef& K_test_train,
                               const CandidateSet& cand, Index k) {
  return decode_scores(score_matrix(model, K_test_train, cand), cand, k);
}

}  // namespace skor
