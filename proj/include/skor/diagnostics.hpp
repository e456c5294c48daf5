#pragma once

#include <optional>
#include <vector>

#include "skor/kernels.hpp"
#include "skor/sketch.hpp"
#include "skor/types.hpp"

namespace skor {

struct SketchDiagnostics {
  double recon_error_sq = 0.0;  // mean squared residual, clamped at 0
  Vector per_point;             // squared residual per evaluation point
  std::optional<double> eff_dim;
};

/// Squared residual of projecting feature-space points onto the span the
/// sketch retains: per_point[i] = diag_eval[i]
///   - kappa_i^T R^T pinv(R K_train R^T) R kappa_i,
/// kappa_i = row i of K_eval_train. Evaluation points may be held out or the
/// training points themselves.
SketchDiagnostics reconstruction_error(const SketchOperator& R,
                                       const GramMatrix& K_train,
                                       const MatrixRef& K_eval_train,
                                       const VectorRef& diag_eval);

/// sum_i sigma_i / (sigma_i + n*t) over the spectrum of K. Eigenvalues below
/// a 1e-12 relative cutoff are treated as exact zeros so rank deficiency is
/// respected at small t.
double effective_dimension(const GramMatrix& K, double t);

struct SweepRow {
  SketchKind kind = SketchKind::subsample;
  Index m = 0;
  double p = 1.0;
  int seed_count = 0;
  double mean_err = 0.0;
  double std_err = 0.0;  // standard error of the seed means
};

/// Averages reconstruction_error over seeds_per_point seeds per spec
/// (seeds spec.seed, spec.seed+1, ...). Rows sorted by m (stable).
std::vector<SweepRow> sketch_size_sweep(const GramMatrix& K_train,
                                        const MatrixRef& K_eval_train,
                                        const VectorRef& diag_eval,
                                        const std::vector<SketchSpec>& specs,
                                        int seeds_per_point);

}  // namespace skor
