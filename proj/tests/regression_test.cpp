#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

#include "skor/kernels.hpp"
#include "skor/regression.hpp"
#include "skor/rng.hpp"
#include "skor/sketch.hpp"

using namespace skor;

namespace {

Matrix random_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.next_normal();
  }
  return M;
}

GramMatrix random_gaussian_gram(Index n, std::uint64_t seed, Index d = 3) {
  RngStream rng(seed);
  const Matrix X = random_matrix(n, d, rng);
  return gram(KernelSpec::gaussian(2.0), X);
}

// Independent pseudo-inverse for the oracle path: SVD instead of the
// library's eigendecomposition route.
Matrix svd_pinv(const Matrix& A, double rtol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rtol * s.maxCoeff();
  Vector sinv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) sinv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1e-300, want.norm());
}

RidgeConfig ridge(double lambda) {
  RidgeConfig cfg;
  cfg.lambda = lambda;
  return cfg;
}

struct RandomInstance {
  GramMatrix K_X, K_Y;
  SketchOperator R_x, R_y;
  double lambda;
  Index n;
};

RandomInstance random_instance(std::uint64_t seed) {
  RngStream rng(seed);
  const Index n = 4 + static_cast<Index>(rng.next_below(5));      // 4..8
  const Index m_x = 1 + static_cast<Index>(rng.next_below(
                            static_cast<std::uint64_t>(n)));      // 1..n
  const Index m_y = 1 + static_cast<Index>(rng.next_below(
                            static_cast<std::uint64_t>(n)));
  RandomInstance inst{
      random_gaussian_gram(n, seed * 2 + 1),
      random_gaussian_gram(n, seed * 2 + 2),
      SketchOperator::from_dense(random_matrix(m_x, n, rng)),
      SketchOperator::from_dense(random_matrix(m_y, n, rng)),
      0.01 + 0.99 * rng.next_unit(),
      n};
  return inst;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("iokr closed forms on tiny systems") {
  GramMatrix K1 = GramMatrix::from_values(Matrix::Identity(1, 1), true);
  const FittedModel one = fit_iokr(K1, ridge(1.0));
  CHECK(one.core(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(one.variant == Variant::iokr);
  CHECK(one.n_train == 1);
  CHECK(one.lambda == 1.0);
  CHECK_FALSE(one.input_sketch.has_value());
  CHECK_FALSE(one.output_sketch.has_value());

  const Index n = 6;
  const double lambda = 0.25;
  GramMatrix KI = GramMatrix::from_values(Matrix::Identity(n, n), true);
  const FittedModel eye = fit_iokr(KI, ridge(lambda));
  const Matrix want = Matrix::Identity(n, n) / (1.0 + n * lambda);
  CHECK(rel_err(eye.core, want) < 1e-12);
}

TEST_CASE("iokr matches the dense inverse on a random gram") {
  const GramMatrix K = random_gaussian_gram(6, 100);
  const double lambda = 0.1;
  const FittedModel model = fit_iokr(K, ridge(lambda));
  const Matrix want =
      (K.values + 6.0 * lambda * Matrix::Identity(6, 6)).inverse();
  CHECK(rel_err(model.core, want) < 1e-9);
}

TEST_CASE("sketched fits match a literal transcription of their closed forms") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RandomInstance inst = random_instance(seed);
    const Matrix KX = inst.K_X.values;
    const Matrix KY = inst.K_Y.values;
    const Matrix Rx = inst.R_x.to_dense();
    const Matrix Ry = inst.R_y.to_dense();
    const double nl = static_cast<double>(inst.n) * inst.lambda;

    // Transcribed directly, n x n squared Gram and all.
    const Matrix A = Rx * KX * KX * Rx.transpose() + nl * Rx * KX * Rx.transpose();
    const Matrix siokr_want = KX * Rx.transpose() * svd_pinv(A);
    const Matrix isokr_want =
        svd_pinv(Ry * KY * Ry.transpose()) * Ry * KY *
        (KX + nl * Matrix::Identity(inst.n, inst.n)).inverse();
    const Matrix sisokr_want = svd_pinv(Ry * KY * Ry.transpose()) * Ry * KY *
                               KX * Rx.transpose() * svd_pinv(A);

    const RidgeConfig cfg = ridge(inst.lambda);
    const FittedModel siokr = fit_siokr(inst.K_X, inst.R_x, cfg);
    const FittedModel isokr = fit_isokr(inst.K_X, inst.K_Y, inst.R_y, cfg);
    const FittedModel sisokr =
        fit_sisokr(inst.K_X, inst.K_Y, inst.R_x, inst.R_y, cfg);

    CAPTURE(seed);
    CHECK(rel_err(siokr.core, siokr_want) < 1e-10);
    CHECK(rel_err(isokr.core, isokr_want) < 1e-10);
    CHECK(rel_err(sisokr.core, sisokr_want.transpose()) < 1e-10);
  }
}

TEST_CASE("identity sketches reduce every variant to iokr") {
  const Index n = 12;
  const SketchOperator I_op = SketchOperator::from_dense(Matrix::Identity(n, n));
  const RidgeConfig cfg = ridge(0.05);

  RngStream rng2(203);
  const Matrix X_train = random_matrix(n, 3, rng2);
  const Matrix X_test = random_matrix(5, 3, rng2);
  const GramMatrix K_X2 = gram(KernelSpec::gaussian(2.0), X_train);
  const Matrix K_te = cross_gram(KernelSpec::gaussian(2.0), X_test, X_train);
  const GramMatrix K_Y2 = random_gaussian_gram(n, 204, 4);

  const Matrix base = coefficients(fit_iokr(K_X2, cfg), K_te);
  const Matrix a_siokr = coefficients(fit_siokr(K_X2, I_op, cfg), K_te);
  const Matrix a_isokr = coefficients(fit_isokr(K_X2, K_Y2, I_op, cfg), K_te);
  const Matrix a_sisokr =
      coefficients(fit_sisokr(K_X2, K_Y2, I_op, I_op, cfg), K_te);

  CHECK(rel_err(a_siokr, base) < 1e-8);
  CHECK(rel_err(a_isokr, base) < 1e-8);
  CHECK(rel_err(a_sisokr, base) < 1e-8);
}

TEST_CASE("permutation sketches also reduce to iokr") {
  const Index n = 10;
  RngStream rng(300);
  const Matrix X_train = random_matrix(n, 3, rng);
  const Matrix X_test = random_matrix(4, 3, rng);
  const GramMatrix K_X = gram(KernelSpec::gaussian(1.5), X_train);
  const GramMatrix K_Y = random_gaussian_gram(n, 301, 4);
  const Matrix K_te = cross_gram(KernelSpec::gaussian(1.5), X_test, X_train);
  const RidgeConfig cfg = ridge(0.02);

  SketchSpec perm_spec;
  perm_spec.kind = SketchKind::subsample;
  perm_spec.m = n;
  perm_spec.seed = 302;
  const SketchOperator P1 = draw(perm_spec, n);
  perm_spec.seed = 303;
  const SketchOperator P2 = draw(perm_spec, n);

  const Matrix base = coefficients(fit_iokr(K_X, cfg), K_te);
  const Matrix a =
      coefficients(fit_sisokr(K_X, K_Y, P1, P2, cfg), K_te);
  CHECK(rel_err(a, base) < 1e-8);
}

TEST_CASE("coefficients on the identity gram") {
  const Index n = 5;
  const double lambda = 0.2;
  GramMatrix K = GramMatrix::from_values(Matrix::Identity(n, n), true);
  const FittedModel model = fit_iokr(K, ridge(lambda));
  const Matrix alpha = coefficients(model, Matrix::Identity(n, n));
  CHECK(rel_err(alpha, Matrix::Identity(n, n) / (1.0 + n * lambda)) < 1e-12);
}

TEST_CASE("zero test rows give zero coefficients for every variant") {
  const RandomInstance inst = random_instance(60);
  const RidgeConfig cfg = ridge(inst.lambda);
  const Matrix zeros = Matrix::Zero(3, inst.n);
  CHECK(coefficients(fit_iokr(inst.K_X, cfg), zeros).norm() == 0.0);
  CHECK(coefficients(fit_siokr(inst.K_X, inst.R_x, cfg), zeros).norm() == 0.0);
  CHECK(coefficients(fit_isokr(inst.K_X, inst.K_Y, inst.R_y, cfg), zeros).norm() ==
        0.0);
  CHECK(coefficients(fit_sisokr(inst.K_X, inst.K_Y, inst.R_x, inst.R_y, cfg),
                     zeros)
            .norm() == 0.0);
}

TEST_CASE("near-interpolation puts the coefficient mass on the matching point") {
  const Index n = 30;
  RngStream rng(400);
  const Matrix X = random_matrix(n, 3, rng);
  const GramMatrix K = gram(KernelSpec::gaussian(2.0), X);
  const FittedModel model = fit_iokr(K, ridge(1e-8));
  const Matrix alpha = coefficients(model, K.values);
  for (Index i = 0; i < n; ++i) {
    Index argmax = 0;
    alpha.row(i).maxCoeff(&argmax);
    CHECK(argmax == i);
  }
}

TEST_CASE("rescaling a sketch does not move the coefficients") {
  const RandomInstance inst = random_instance(61);
  const RidgeConfig cfg = ridge(inst.lambda);
  RngStream rng(500);
  const Matrix K_te = random_matrix(3, inst.n, rng);

  const SketchOperator Rx_scaled =
      SketchOperator::from_dense(3.7 * inst.R_x.to_dense());
  const SketchOperator Ry_scaled =
      SketchOperator::from_dense(0.21 * inst.R_y.to_dense());

  const Matrix base = coefficients(
      fit_sisokr(inst.K_X, inst.K_Y, inst.R_x, inst.R_y, cfg), K_te);
  const Matrix scaled = coefficients(
      fit_sisokr(inst.K_X, inst.K_Y, Rx_scaled, Ry_scaled, cfg), K_te);
  CHECK(rel_err(scaled, base) < 1e-9);

  const Matrix base_si =
      coefficients(fit_siokr(inst.K_X, inst.R_x, cfg), K_te);
  const Matrix scaled_si =
      coefficients(fit_siokr(inst.K_X, Rx_scaled, cfg), K_te);
  CHECK(rel_err(scaled_si, base_si) < 1e-9);
}

TEST_CASE("coefficient norms shrink as lambda grows") {
  const RandomInstance inst = random_instance(62);
  RngStream rng(600);
  const Matrix K_te = random_matrix(4, inst.n, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1e-4, 1e-2, 1.0, 1e2, 1e4}) {
    const FittedModel model =
        fit_sisokr(inst.K_X, inst.K_Y, inst.R_x, inst.R_y, ridge(lambda));
    const double norm = coefficients(model, K_te).norm();
    CHECK(norm <= prev * (1.0 + 1e-12));
    prev = norm;
  }
}

TEST_CASE("jointly permuting training data and sketch columns is a no-op") {
  const RandomInstance inst = random_instance(63);
  const RidgeConfig cfg = ridge(inst.lambda);
  RngStream rng(700);
  const Matrix K_te = random_matrix(3, inst.n, rng);

  // Random permutation P as a dense matrix.
  std::vector<Index> perm(static_cast<std::size_t>(inst.n));
  for (Index i = 0; i < inst.n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = inst.n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  Matrix P = Matrix::Zero(inst.n, inst.n);
  for (Index i = 0; i < inst.n; ++i) P(i, perm[static_cast<std::size_t>(i)]) = 1.0;

  const GramMatrix K_Xp =
      GramMatrix::from_values(P * inst.K_X.values * P.transpose(), true);
  const GramMatrix K_Yp =
      GramMatrix::from_values(P * inst.K_Y.values * P.transpose(), true);
  const SketchOperator Rxp =
      SketchOperator::from_dense(inst.R_x.to_dense() * P.transpose());
  const SketchOperator Ryp =
      SketchOperator::from_dense(inst.R_y.to_dense() * P.transpose());
  const Matrix K_tep = K_te * P.transpose();

  const Matrix base = coefficients(
      fit_sisokr(inst.K_X, inst.K_Y, inst.R_x, inst.R_y, cfg), K_te);
  const Matrix permuted =
      coefficients(fit_sisokr(K_Xp, K_Yp, Rxp, Ryp, cfg), K_tep);
  // alpha entries follow the training permutation.
  CHECK(rel_err(permuted * P, base) < 1e-9);
}

TEST_CASE("dimension and parameter validation") {
  const GramMatrix K = random_gaussian_gram(5, 800);
  const GramMatrix K4 = random_gaussian_gram(4, 801);
  const SketchOperator R3 = SketchOperator::from_dense(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(fit_iokr(K, ridge(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(fit_iokr(K, ridge(-1.0)), std::invalid_argument);
  CHECK_THROWS_AS(fit_siokr(K, R3, ridge(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(fit_isokr(K, K4, R3, ridge(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(fit_sisokr(K, K4, R3, R3, ridge(0.1)), std::invalid_argument);

  const FittedModel model = fit_iokr(K, ridge(0.1));
  CHECK_THROWS_AS(coefficients(model, Matrix::Zero(2, 4)), std::invalid_argument);

  GramMatrix nonsquare;
  nonsquare.values = Matrix::Zero(2, 3);
  CHECK_THROWS_AS(fit_iokr(nonsquare, ridge(0.1)), std::invalid_argument);
}

TEST_CASE("variant names round-trip") {
  for (Variant v :
       {Variant::iokr, Variant::siokr, Variant::isokr, Variant::sisokr}) {
    CHECK(variant_from_name(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(variant_from_name("krr"), std::invalid_argument);
}

}  // TEST_SUITE
