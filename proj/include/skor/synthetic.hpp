#pragma once

#include <cstdint>

#include "skor/rng.hpp"
#include "skor/types.hpp"

namespace skor {

/// Linear-map regression task with controlled covariance spectra:
/// x ~ N(0, C) with sigma_k(C) = k^-c_decay, noise ~ N(0, E) with
/// sigma_k(E) = e_scale * k^-e_decay, y = H x + noise, H = C * H0.
struct SyntheticSpec {
  Index n = 1000;
  Index n_val = 200;
  Index n_te = 200;
  Index d = 50;
  std::uint64_t seed = 0;
  double c_decay = 1.5;
  double e_scale = 0.2;
  double e_decay = 0.1;

  void validate() const;
};

struct SyntheticDataset {
  Matrix X_train, X_val, X_test;  // samples x d
  Matrix Y_train, Y_val, Y_test;
  Matrix H_true;  // d x d
  Matrix C, E;    // population covariances, kept for diagnostics
};

/// Haar-distributed orthogonal matrix: QR of an i.i.d. N(0,1) matrix with
/// the R diagonal signs folded into Q.
Matrix haar_orthogonal(Index d, RngStream& rng);

SyntheticDataset generate(const SyntheticSpec& spec);

/// Mean over samples of ||row difference||^2 / d.
double mse(const MatrixRef& Y_pred, const MatrixRef& Y_true);

}  // namespace skor
