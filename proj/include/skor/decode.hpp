#pragma once

#include <string>
#include <vector>

#include "skor/regression.hpp"
#include "skor/types.hpp"

namespace skor {

/// Finite candidate pool scored during pre-image search. cross_gram holds
/// output-kernel values between training outputs (rows) and candidates
/// (columns); diag holds k_y(c_j, c_j).
struct CandidateSet {
  Matrix cross_gram;                // n_train x n_c
  Vector diag;                      // n_c
  std::vector<std::string> labels;  // optional identifiers, empty or size n_c

  Index size() const { return diag.size(); }
  void validate(Index n_train) const;
};

struct Prediction {
  Index index = -1;    // best candidate
  double score = 0.0;  // minimized objective k_y(c,c) - 2*s
  std::vector<Index> topk;
};

/// S[t][j] = <alpha(x_t), k_Y column of candidate j>, associated so no
/// intermediate exceeds the sketch dimensions (sketched factors applied
/// to the Grams before the core product).
Matrix score_matrix(const FittedModel& model, const MatrixRef& K_test_train,
                    const CandidateSet& cand);

/// Ranks candidates per test row by objective diag[j] - 2*S[t][j]; returns
/// the k smallest in nondecreasing order, ties broken by smaller index.
std::vector<Prediction> decode_scores(const MatrixRef& scores,
                                      const CandidateSet& cand, Index k);

std::vector<Prediction> decode(const FittedModel& model,
                               const MatrixRef& K_test_train,
                               const CandidateSet& cand, Index k = 1);

}  // namespace skor
