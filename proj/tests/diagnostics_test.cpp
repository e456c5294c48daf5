#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "skor/diagnostics.hpp"
#include "skor/kernels.hpp"
#include "skor/linalg.hpp"
#include "skor/rng.hpp"
#include "skor/synthetic.hpp"

using namespace skor;

namespace {

Matrix random_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.next_normal();
  }
  return M;
}

SketchSpec make_spec(SketchKind kind, Index m, std::uint64_t seed, double p = 1.0) {
  SketchSpec s;
  s.kind = kind;
  s.m = m;
  s.p = p;
  s.seed = seed;
  return s;
}

/// Gram with eigenvalues k^-decay and Haar-random eigenvectors.
GramMatrix spectrum_gram(Index n, double decay, std::uint64_t seed) {
  RngStream rng(seed);
  const Matrix U = haar_orthogonal(n, rng);
  Vector w(n);
  for (Index k = 0; k < n; ++k) {
    w[k] = std::pow(static_cast<double>(k + 1), -decay);
  }
  return GramMatrix::from_values(U * w.asDiagonal() * U.transpose(), true);
}

struct EvalSetup {
  GramMatrix K_train;
  Matrix K_eval_train;
  Vector diag_eval;
  Matrix X_train, X_eval;
};

// q = 0 evaluates on the training points themselves.
EvalSetup gaussian_setup(Index n, Index q, std::uint64_t seed) {
  RngStream rng(seed);
  EvalSetup s;
  s.X_train = random_matrix(n, 3, rng);
  const KernelSpec spec = KernelSpec::gaussian(2.0);
  s.K_train = gram(spec, s.X_train);
  if (q == 0) {
    s.X_eval = s.X_train;
    s.K_eval_train = s.K_train.values;
    s.diag_eval = s.K_train.diag;
  } else {
    s.X_eval = random_matrix(q, 3, rng);
    s.K_eval_train = cross_gram(spec, s.X_eval, s.X_train);
    s.diag_eval = Vector::Ones(q);
  }
  return s;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("a full permutation sketch reconstructs training points exactly") {
  const EvalSetup s = gaussian_setup(12, 0, 50);
  const SketchOperator R = draw(make_spec(SketchKind::subsample, 12, 51), 12);
  const SketchDiagnostics d = reconstruction_error(
      R, s.K_train, s.K_train.values, s.K_train.diag);
  CHECK(d.per_point.maxCoeff() <= 1e-8);
  CHECK(d.recon_error_sq <= 1e-8);
  CHECK(d.recon_error_sq >= 0.0);
}

TEST_CASE("residual vanishes at the sampled anchors") {
  const EvalSetup s = gaussian_setup(15, 0, 52);
  const SketchOperator R = draw(make_spec(SketchKind::subsample, 5, 53), 15);
  const SketchDiagnostics d = reconstruction_error(
      R, s.K_train, s.K_train.values, s.K_train.diag);
  for (Index idx : R.indices()) {
    CHECK(d.per_point[idx] <= 1e-8);
  }
}

TEST_CASE("per-point residuals match an explicit feature-space projector") {
  const Index n = 5, q = 3;
  const EvalSetup s = gaussian_setup(n, q, 54);
  const SketchOperator R = draw(make_spec(SketchKind::gaussian, 2, 55), n);

  // Finite-dimensional features from the joint Gram of all n + q points.
  const KernelSpec spec = KernelSpec::gaussian(2.0);
  Matrix Z(n + q, 3);
  Z.topRows(n) = s.X_train;
  Z.bottomRows(q) = s.X_eval;
  const GramMatrix KJ = gram(spec, Z);
  Eigen::SelfAdjointEigenSolver<Matrix> es(KJ.values);
  const Matrix Phi =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  // Projector onto the span of the sketched training features.
  const Matrix B = (R.to_dense() * Phi.topRows(n)).transpose();
  const Matrix Pi = B * sym_pinv(B.transpose() * B) * B.transpose();

  const SketchDiagnostics d =
      reconstruction_error(R, s.K_train, s.K_eval_train, s.diag_eval);
  for (Index i = 0; i < q; ++i) {
    const Vector phi = Phi.row(n + i).transpose();
    const double want = (phi - Pi * phi).squaredNorm();
    CHECK(d.per_point[i] == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("residuals stay between zero and the evaluation diagonal") {
  const EvalSetup s = gaussian_setup(20, 15, 56);
  for (SketchKind kind :
       {SketchKind::subsample, SketchKind::gaussian, SketchKind::p_sg}) {
    const SketchOperator R = draw(make_spec(kind, 6, 57, 0.5), 20);
    const SketchDiagnostics d =
        reconstruction_error(R, s.K_train, s.K_eval_train, s.diag_eval);
    CHECK(d.per_point.minCoeff() >= 0.0);
    CHECK(((s.diag_eval - d.per_point).array() >= -1e-9).all());
  }
}

TEST_CASE("nested anchors never increase the residual") {
  const EvalSetup s = gaussian_setup(40, 25, 58);
  for (std::uint64_t seed = 60; seed < 65; ++seed) {
    double prev = std::numeric_limits<double>::infinity();
    for (Index m : {2, 4, 8, 16, 32}) {
      const SketchOperator R = draw(make_spec(SketchKind::subsample, m, seed), 40);
      const double err =
          reconstruction_error(R, s.K_train, s.K_eval_train, s.diag_eval)
              .recon_error_sq;
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("gaussian sketches improve with size on a fast-decay spectrum") {
  const GramMatrix K = spectrum_gram(100, 1.5, 59);
  std::vector<SketchSpec> specs;
  for (Index m : {4, 16, 64}) {
    specs.push_back(make_spec(SketchKind::gaussian, m, 1000));
  }
  const auto rows =
      sketch_size_sweep(K, K.values, K.diag, specs, 10);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].m == 4);
  CHECK(rows[2].m == 64);
  CHECK(rows[1].mean_err <= rows[0].mean_err);
  CHECK(rows[2].mean_err <= rows[1].mean_err);
}

TEST_CASE("sweep with one spec and one seed equals the direct call") {
  const EvalSetup s = gaussian_setup(18, 9, 61);
  const SketchSpec spec = make_spec(SketchKind::gaussian, 5, 62);
  const auto rows =
      sketch_size_sweep(s.K_train, s.K_eval_train, s.diag_eval, {spec}, 1);
  REQUIRE(rows.size() == 1);
  const SketchOperator R = draw(spec, 18);
  const double direct =
      reconstruction_error(R, s.K_train, s.K_eval_train, s.diag_eval)
          .recon_error_sq;
  CHECK(rows[0].mean_err == doctest::Approx(direct).epsilon(1e-15));
  CHECK(rows[0].std_err == 0.0);
  CHECK(rows[0].seed_count == 1);
}

TEST_CASE("sweep rows come back sorted by sketch size") {
  const EvalSetup s = gaussian_setup(16, 0, 63);
  std::vector<SketchSpec> specs = {make_spec(SketchKind::subsample, 16, 64),
                                   make_spec(SketchKind::subsample, 2, 64),
                                   make_spec(SketchKind::subsample, 8, 64)};
  const auto rows = sketch_size_sweep(s.K_train, s.K_train.values,
                                      s.K_train.diag, specs, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].m == 2);
  CHECK(rows[1].m == 8);
  CHECK(rows[2].m == 16);
  // The full-size subsample is a permutation: zero residual on training data.
  CHECK(rows[2].mean_err <= 1e-8);
}

TEST_CASE("effective dimension of the identity gram") {
  const Index n = 7;
  const GramMatrix K = GramMatrix::from_values(Matrix::Identity(n, n), true);
  for (double t : {1e-3, 0.1, 2.0}) {
    const double want = static_cast<double>(n) / (1.0 + n * t);
    CHECK(effective_dimension(K, t) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("effective dimension recovers the rank as t vanishes") {
  RngStream rng(70);
  const Index n = 12, r = 4;
  const Matrix B = random_matrix(n, r, rng);
  const GramMatrix K = GramMatrix::from_values(B * B.transpose(), true);
  CHECK(effective_dimension(K, 1e-12) ==
        doctest::Approx(static_cast<double>(r)).epsilon(1e-6));
}

TEST_CASE("effective dimension matches the solve-based trace oracle") {
  const EvalSetup s = gaussian_setup(6, 0, 71);
  const double t = 0.1;
  const double nt = 6.0 * t;
  const double want =
      reg_solve(s.K_train.values, nt, s.K_train.values).trace();
  CHECK(effective_dimension(s.K_train, t) ==
        doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("effective dimension decreases in t and respects the rank bound") {
  const GramMatrix K = spectrum_gram(30, 1.5, 72);
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {1e-6, 1e-4, 1e-2, 1.0, 1e2}) {
    const double d = effective_dimension(K, t);
    CHECK(d < prev);
    CHECK(d <= 30.0);
    CHECK(d >= 0.0);
    prev = d;
  }
}

TEST_CASE("validation failures") {
  const EvalSetup s = gaussian_setup(8, 4, 73);
  const SketchOperator R = draw(make_spec(SketchKind::subsample, 3, 74), 8);
  CHECK_THROWS_AS(effective_dimension(s.K_train, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(effective_dimension(s.K_train, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      reconstruction_error(R, s.K_train, Matrix::Zero(4, 9), s.diag_eval),
      std::invalid_argument);
  CHECK_THROWS_AS(
      reconstruction_error(R, s.K_train, s.K_eval_train, Vector::Zero(3)),
      std::invalid_argument);
  CHECK_THROWS_AS(sketch_size_sweep(s.K_train, s.K_eval_train, s.diag_eval, {}, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sketch_size_sweep(s.K_train, s.K_eval_train, s.diag_eval,
                        {make_spec(SketchKind::gaussian, 2, 1)}, 0),
      std::invalid_argument);
}

}  // TEST_SUITE
