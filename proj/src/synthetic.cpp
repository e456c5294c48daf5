#include "skor/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace skor {

void SyntheticSpec::validate() const {
  if (n < 1 || n_val < 1 || n_te < 1) {
    throw std::invalid_argument("synthetic sample counts must be >= 1");
  }
  if (d < 1) throw std::invalid_argument("synthetic dimension must be >= 1");
  if (!(c_decay > 0.0) || !(e_decay > 0.0) || !(e_scale > 0.0)) {
    throw std::invalid_argument("synthetic spectrum parameters must be positive");
  }
}

Matrix haar_orthogonal(Index d, RngStream& rng) {
  Matrix Z(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) Z(i, j) = rng.next_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(Z);
  Matrix Q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix R = qr.matrixQR();
  // Fixing the R-diagonal signs removes the QR convention bias and makes
  // the factorization the unique one with positive diagonal, i.e. Haar.
  for (Index j = 0; j < d; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

namespace {

// Samples count rows of N(0, B B^T): row i = (B g_i)^T with g_i standard
// normal, g entries consumed row-major over (sample, coordinate).
Matrix sample_rows(Index count, const Matrix& B, RngStream& rng) {
  const Index d = B.cols();
  Matrix G(count, d);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < d; ++j) G(i, j) = rng.next_normal();
  }
  return G * B.transpose();
}

}  // namespace

SyntheticDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  RngStream rng(spec.seed);
  const Index d = spec.d;

  const Matrix U = haar_orthogonal(d, rng);
  const Matrix V = haar_orthogonal(d, rng);

  Vector sc(d), se(d);
  for (Index k = 0; k < d; ++k) {
    sc[k] = std::pow(static_cast<double>(k + 1), -spec.c_decay);
    se[k] = spec.e_scale * std::pow(static_cast<double>(k + 1), -spec.e_decay);
  }

  SyntheticDataset out;
  out.C = U * sc.asDiagonal() * U.transpose();
  out.C = 0.5 * (out.C + out.C.transpose()).eval();
  out.E = V * se.asDiagonal() * V.transpose();
  out.E = 0.5 * (out.E + out.E.transpose()).eval();

  Matrix H0(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) H0(i, j) = rng.next_normal();
  }
  out.H_true = out.C * H0;

  const Matrix Bx = U * sc.cwiseSqrt().asDiagonal();
  const Matrix Be = V * se.cwiseSqrt().asDiagonal();

  const auto make_split = [&](Index count, Matrix& X, Matrix& Y) {
    X = sample_rows(count, Bx, rng);
    Y = X * out.H_true.transpose() + sample_rows(count, Be, rng);
  };
  make_split(spec.n, out.X_train, out.Y_train);
  make_split(spec.n_val, out.X_val, out.Y_val);
  make_split(spec.n_te, out.X_test, out.Y_test);
  return out;
}

double mse(const MatrixRef& Y_pred, const MatrixRef& Y_true) {
  if (Y_pred.rows() != Y_true.rows() || Y_pred.cols() != Y_true.cols()) {
    throw std::invalid_argument("mse: shape mismatch");
  }
  if (Y_pred.rows() == 0 || Y_pred.cols() == 0) {
    throw std::invalid_argument("mse: empty input");
  }
  const double d = static_cast<double>(Y_pred.cols());
  return (Y_pred - Y_true).rowwise().squaredNorm().mean() / d;
}

}  // namespace skor
