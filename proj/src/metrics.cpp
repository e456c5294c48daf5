#include "skor/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace skor {

LabelSet LabelSet::from_unsorted(std::vector<int> raw) {
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  LabelSet s;
  s.indices = std::move(raw);
  s.validate();
  return s;
}

void LabelSet::validate() const {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0) {
      throw std::invalid_argument("label indices must be nonnegative");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw std::invalid_argument("label indices must be sorted and unique");
    }
  }
}

double f1_example(const LabelSet& pred, const LabelSet& truth) {
  if (pred.empty() && truth.empty()) return 1.0;
  std::size_t i = 0, j = 0, inter = 0;
  while (i < pred.indices.size() && j < truth.indices.size()) {
    if (pred.indices[i] == truth.indices[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (pred.indices[i] < truth.indices[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(inter) /
         static_cast<double>(pred.indices.size() + truth.indices.size());
}

double f1_dataset(const std::vector<LabelSet>& preds,
                  const std::vector<LabelSet>& truths) {
  if (preds.size() != truths.size()) {
    throw std::invalid_argument("f1_dataset: prediction/truth count mismatch");
  }
  if (preds.empty()) throw std::invalid_argument("f1_dataset: no examples");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    sum += f1_example(preds[i], truths[i]);
  }
  return sum / static_cast<double>(preds.size());
}

double topk_accuracy(const std::vector<std::vector<Index>>& ranked,
                     const std::vector<Index>& truth, Index k) {
  if (ranked.size() != truth.size()) {
    throw std::invalid_argument("topk_accuracy: ranking/truth count mismatch");
  }
  if (ranked.empty()) throw std::invalid_argument("topk_accuracy: no examples");
  if (k < 1) throw std::invalid_argument("topk_accuracy: k must be >= 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    const std::size_t depth =
        std::min(r.size(), static_cast<std::size_t>(k));
    for (std::size_t j = 0; j < depth; ++j) {
      if (r[j] == truth[i]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(ranked.size());
}

double kernel_loss(double k_yy, double k_pp, double k_yp) {
  const double v = k_yy + k_pp - 2.0 * k_yp;
  // Only round-off-sized negatives are forgiven; anything worse is a real
  // PSD violation and passes through for the caller to see.
  if (v < 0.0 && v >= -1e-12) return 0.0;
  return v;
}

}  // namespace skor
