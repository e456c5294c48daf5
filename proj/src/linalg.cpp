#include "skor/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace skor {

void SolveOptions::validate() const {
  if (!(pinv_rtol > 0.0 && pinv_rtol < 1.0)) {
    throw std::invalid_argument("pinv_rtol must lie in (0, 1)");
  }
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
    throw std::invalid_argument("jitter must be finite and >= 0");
  }
}

Matrix reg_solve(const MatrixRef& A, double shift, const MatrixRef& B,
                 const SolveOptions& opts) {
  opts.validate();
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("reg_solve: A must be square");
  }
  if (B.rows() != A.rows()) {
    throw std::invalid_argument("reg_solve: B has " + std::to_string(B.rows()) +
                                " rows, expected " + std::to_string(A.rows()));
  }
  if (!(shift > 0.0) || !std::isfinite(shift)) {
    throw std::invalid_argument("reg_solve: shift must be positive and finite");
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw std::invalid_argument("reg_solve: non-finite input");
  }

  const Index q = A.rows();
  Matrix M = 0.5 * (A + A.transpose());
  M.diagonal().array() += shift;

  Eigen::LLT<Matrix> llt(M);
  if (llt.info() == Eigen::Success) return llt.solve(B);

  double jitter = opts.jitter;
  if (jitter == 0.0) jitter = 1e-12 * std::abs(M.trace()) / static_cast<double>(q);
  if (jitter == 0.0) jitter = 1e-12 * shift;
  M.diagonal().array() += jitter;
  Eigen::LLT<Matrix> retry(M);
  if (retry.info() == Eigen::Success) return retry.solve(B);

  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  throw std::runtime_error(
      "reg_solve: Cholesky failed after jitter retry (eigenvalue range [" +
      std::to_string(lo) + ", " + std::to_string(hi) +
      "], condition estimate " + std::to_string(cond) + ")");
}

Matrix sym_pinv(const MatrixRef& A, double rtol) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("sym_pinv: matrix must be square");
  }
  if (!(rtol >= 0.0 && rtol < 1.0)) {
    throw std::invalid_argument("sym_pinv: rtol must lie in [0, 1)");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("sym_pinv: non-finite input");
  }

  const Matrix S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("sym_pinv: eigendecomposition failed");
  }
  const Vector& w = es.eigenvalues();
  const double cutoff = rtol * w.cwiseAbs().maxCoeff();
  Vector winv = Vector::Zero(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > cutoff) winv[i] = 1.0 / w[i];
  }
  const Matrix P =
      es.eigenvectors() * winv.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (P + P.transpose());
}

}  // namespace skor
