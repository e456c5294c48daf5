#include "skor/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "skor/linalg.hpp"

namespace skor {

SketchDiagnostics reconstruction_error(const SketchOperator& R,
                                       const GramMatrix& K_train,
                                       const MatrixRef& K_eval_train,
                                       const VectorRef& diag_eval) {
  if (K_train.rows() != K_train.cols()) {
    throw std::invalid_argument("reconstruction_error: Gram must be square");
  }
  const Index n = K_train.rows();
  if (R.cols() != n) {
    throw std::invalid_argument("reconstruction_error: sketch width mismatch");
  }
  if (K_eval_train.cols() != n) {
    throw std::invalid_argument(
        "reconstruction_error: evaluation cross-Gram width mismatch");
  }
  if (diag_eval.size() != K_eval_train.rows()) {
    throw std::invalid_argument(
        "reconstruction_error: diag length and evaluation rows differ");
  }

  // Residual of projecting chi(z_i) onto the sketched span, all through
  // Gram-side quantities: diag_i - kappa_i^T R^T (R K R^T)^+ R kappa_i.
  const Matrix P = sym_pinv(sketch_gram(R, K_train));
  const Matrix RKe = R.apply_left(K_eval_train.transpose());  // m x q
  const Vector quad = (RKe.array() * (P * RKe).array()).colwise().sum();

  SketchDiagnostics d;
  d.per_point = (diag_eval - quad).cwiseMax(0.0);  // round-off clamp
  d.recon_error_sq = d.per_point.size() > 0 ? d.per_point.mean() : 0.0;
  return d;
}

double effective_dimension(const GramMatrix& K, double t) {
  if (K.rows() != K.cols()) {
    throw std::invalid_argument("effective_dimension: Gram must be square");
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("effective_dimension: t must be positive");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (K.values + K.values.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("effective_dimension: eigendecomposition failed");
  }
  const Vector& w = es.eigenvalues();
  const double wmax = w.cwiseAbs().maxCoeff();
  // Spectrum noise below this relative floor counts as exact rank
  // deficiency, so the t -> 0 limit recovers rank(K).
  const double cutoff = 1e-12 * wmax;
  const double nt = static_cast<double>(K.rows()) * t;
  double sum = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    if (w[i] > cutoff) sum += w[i] / (w[i] + nt);
  }
  return sum;
}

std::vector<SweepRow> sketch_size_sweep(const GramMatrix& K_train,
                                        const MatrixRef& K_eval_train,
                                        const VectorRef& diag_eval,
                                        const std::vector<SketchSpec>& specs,
                                        int seeds_per_point) {
  if (specs.empty()) {
    throw std::invalid_argument("sketch_size_sweep: empty spec list");
  }
  if (seeds_per_point < 1) {
    throw std::invalid_argument("sketch_size_sweep: seeds_per_point must be >= 1");
  }

  std::vector<SweepRow> rows;
  rows.reserve(specs.size());
  for (const SketchSpec& base : specs) {
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < seeds_per_point; ++s) {
      SketchSpec spec = base;
      spec.seed = base.seed + static_cast<std::uint64_t>(s);
      const SketchOperator R = draw(spec, K_train.rows());
      const double err =
          reconstruction_error(R, K_train, K_eval_train, diag_eval)
              .recon_error_sq;
      sum += err;
      sum_sq += err * err;
    }
    const double c = static_cast<double>(seeds_per_point);
    SweepRow row;
    row.kind = base.kind;
    row.m = base.m;
    row.p = base.p;
    row.seed_count = seeds_per_point;
    row.mean_err = sum / c;
    if (seeds_per_point > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
      row.std_err = std::sqrt(var / c);
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.m < b.m; });
  return rows;
}

}  // namespace skor
