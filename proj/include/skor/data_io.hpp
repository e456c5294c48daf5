#pragma once

#include <string>
#include <vector>

#include "skor/kernels.hpp"
#include "skor/metrics.hpp"
#include "skor/regression.hpp"
#include "skor/types.hpp"

namespace skor {

// Binary matrix container: magic "SKMX", u16 version (=1), u64 rows,
// u64 cols, u8 dtype tag (0 = f64), then row-major little-endian doubles.
// Loads reject bad magic/version/dtype, truncated payloads, and non-finite
// values.

Matrix load_matrix(const std::string& path);
void save_matrix(const MatrixRef& M, const std::string& path);

/// Plot-friendly mirror of save_matrix: one row per line, comma separated,
/// full double precision.
void save_matrix_csv(const MatrixRef& M, const std::string& path);

/// Precomputed Gram: SKMX payload at `path` plus a sidecar `path + ".json"`
/// carrying {"symmetric": bool}.
GramMatrix load_gram(const std::string& path);
void save_gram(const GramMatrix& G, const std::string& path);

// Sparse multilabel text format:
//   #labels <L>
//   <example_index>: j1,j2,...
// Indices per line sorted, unique, in [0, L). Lines may list no labels
// ("3:"); missing example indices load as empty sets.

struct LabelData {
  int n_labels = 0;
  std::vector<LabelSet> examples;
};

LabelData load_labels(const std::string& path);
void save_labels(const LabelData& data, const std::string& path);

// Fitted-model persistence: `prefix.json` holds variant, lambda, n_train and
// the sketch descriptions; `prefix.core.skmx` holds the core matrix.
// Sub-sample sketches store their anchor indices verbatim; distributional
// sketches store their generating spec and are redrawn on load (identical by
// seed determinism). Sketches built from raw dense matrices carry no spec and
// cannot be saved.

void save_model(const FittedModel& model, const std::string& prefix);
FittedModel load_model(const std::string& prefix);

}  // namespace skor
