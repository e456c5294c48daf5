#pragma once

#include <vector>

#include "skor/types.hpp"

namespace skor {

/// Active labels of one example; indices sorted, unique, nonnegative.
struct LabelSet {
  std::vector<int> indices;

  static LabelSet from_unsorted(std::vector<int> raw);
  void validate() const;
  bool empty() const { return indices.empty(); }
};

/// 2|pred ∩ truth| / (|pred| + |truth|); both empty -> 1, one empty -> 0.
double f1_example(const LabelSet& pred, const LabelSet& truth);

/// Example-based average of f1_example.
double f1_dataset(const std::vector<LabelSet>& preds,
                  const std::vector<LabelSet>& truths);

/// Fraction of examples whose truth id occurs in the first k ranked entries.
double topk_accuracy(const std::vector<std::vector<Index>>& ranked,
                     const std::vector<Index>& truth, Index k);

/// Squared feature-space distance k_yy + k_pp - 2 k_yp; tiny negative
/// round-off (>= -1e-12) is clamped to 0.
double kernel_loss(double k_yy, double k_pp, double k_yp);

}  // namespace skor
