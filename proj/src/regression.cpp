#include "skor/regression.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skor {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::iokr:
      return "iokr";
    case Variant::siokr:
      return "siokr";
    case Variant::isokr:
      return "isokr";
    case Variant::sisokr:
      return "sisokr";
  }
  throw std::logic_error("variant_name: bad enum value");
}

Variant variant_from_name(const std::string& name) {
  if (name == "iokr") return Variant::iokr;
  if (name == "siokr") return Variant::siokr;
  if (name == "isokr") return Variant::isokr;
  if (name == "sisokr") return Variant::sisokr;
  throw std::invalid_argument("unknown variant: " + name);
}

void RidgeConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("ridge lambda must be positive and finite");
  }
  solve.validate();
}

namespace {

void require_square(const GramMatrix& K, const char* who) {
  if (K.rows() != K.cols()) {
    throw std::invalid_argument(std::string(who) + ": Gram must be square");
  }
}

void require_cols(const SketchOperator& R, Index n, const char* who) {
  if (R.cols() != n) {
    throw std::invalid_argument(std::string(who) + ": sketch drawn for n=" +
                                std::to_string(R.cols()) + ", Gram has n=" +
                                std::to_string(n));
  }
}

}  // namespace

FittedModel fit_iokr(const GramMatrix& K_X, const RidgeConfig& cfg) {
  cfg.validate();
  require_square(K_X, "fit_iokr");
  const Index n = K_X.rows();
  const double shift = static_cast<double>(n) * cfg.lambda;

  FittedModel model;
  model.variant = Variant::iokr;
  model.core = reg_solve(K_X.values, shift, Matrix::Identity(n, n), cfg.solve);
  model.n_train = n;
  model.lambda = cfg.lambda;
  return model;
}

FittedModel fit_siokr(const GramMatrix& K_X, const SketchOperator& R_x,
                      const RidgeConfig& cfg) {
  cfg.validate();
  require_square(K_X, "fit_siokr");
  const Index n = K_X.rows();
  require_cols(R_x, n, "fit_siokr");
  const double shift = static_cast<double>(n) * cfg.lambda;

  const Matrix G = R_x.apply_left(K_X.values);  // m_x x n
  Matrix A = G * G.transpose() + shift * sketch_gram(R_x, K_X);
  A = 0.5 * (A + A.transpose());

  FittedModel model;
  model.variant = Variant::siokr;
  // K_X R_x^T = G^T for symmetric K_X.
  model.core = G.transpose() * sym_pinv(A, cfg.solve.pinv_rtol);  // n x m_x
  model.input_sketch = R_x;
  model.n_train = n;
  model.lambda = cfg.lambda;
  return model;
}

FittedModel fit_isokr(const GramMatrix& K_X, const GramMatrix& K_Y,
                      const SketchOperator& R_y, const RidgeConfig& cfg) {
  cfg.validate();
  require_square(K_X, "fit_isokr");
  require_square(K_Y, "fit_isokr");
  if (K_X.rows() != K_Y.rows()) {
    throw std::invalid_argument("fit_isokr: K_X and K_Y sizes differ");
  }
  const Index n = K_X.rows();
  require_cols(R_y, n, "fit_isokr");
  const double shift = static_cast<double>(n) * cfg.lambda;

  const Matrix RyKY = R_y.apply_left(K_Y.values);  // m_y x n
  // (K_X + shift I)^{-1} is symmetric, so solving against RyKY^T and
  // transposing gives RyKY (K_X + shift I)^{-1} without an n x n inverse.
  const Matrix right =
      reg_solve(K_X.values, shift, RyKY.transpose(), cfg.solve).transpose();

  FittedModel model;
  model.variant = Variant::isokr;
  model.core = sym_pinv(sketch_gram(R_y, K_Y), cfg.solve.pinv_rtol) * right;
  model.output_sketch = R_y;
  model.n_train = n;
  model.lambda = cfg.lambda;
  return model;
}

FittedModel fit_sisokr(const GramMatrix& K_X, const GramMatrix& K_Y,
                       const SketchOperator& R_x, const SketchOperator& R_y,
                       const RidgeConfig& cfg) {
  cfg.validate();
  require_square(K_X, "fit_sisokr");
  require_square(K_Y, "fit_sisokr");
  if (K_X.rows() != K_Y.rows()) {
    throw std::invalid_argument("fit_sisokr: K_X and K_Y sizes differ");
  }
  const Index n = K_X.rows();
  require_cols(R_x, n, "fit_sisokr");
  require_cols(R_y, n, "fit_sisokr");
  const double shift = static_cast<double>(n) * cfg.lambda;

  // Input chain via G = R_x K_X so the n x n square K_X^2 is never formed.
  const Matrix G = R_x.apply_left(K_X.values);  // m_x x n
  Matrix A = G * G.transpose() + shift * sketch_gram(R_x, K_X);
  A = 0.5 * (A + A.transpose());
  const Matrix B = R_y.apply_left(K_Y.values) * G.transpose();  // m_y x m_x

  const Matrix omega = sym_pinv(sketch_gram(R_y, K_Y), cfg.solve.pinv_rtol) *
                       B * sym_pinv(A, cfg.solve.pinv_rtol);  // m_y x m_x

  FittedModel model;
  model.variant = Variant::sisokr;
  model.core = omega.transpose();  // stored m_x x m_y
  model.input_sketch = R_x;
  model.output_sketch = R_y;
  model.n_train = n;
  model.lambda = cfg.lambda;
  return model;
}

Matrix coefficients(const FittedModel& model, const MatrixRef& K_test_train) {
  if (K_test_train.cols() != model.n_train) {
    throw std::invalid_argument("coefficients: cross-Gram has " +
                                std::to_string(K_test_train.cols()) +
                                " columns, expected " +
                                std::to_string(model.n_train));
  }
  switch (model.variant) {
    case Variant::iokr:
      // core is symmetric, so row t of the result is core * kappa_t.
      return K_test_train * model.core;
    case Variant::siokr: {
      // alpha_t = core (R_x kappa_t); columns of S1 are R_x kappa_t.
      const Matrix S1 = model.input_sketch->apply_left(K_test_train.transpose());
      return (model.core * S1).transpose();
    }
    case Variant::isokr: {
      // alpha_t = R_y^T (core kappa_t).
      const Matrix beta = model.core * K_test_train.transpose();  // m_y x n_te
      return model.output_sketch->apply_adjoint(beta).transpose();
    }
    case Variant::sisokr: {
      const Matrix S1 = model.input_sketch->apply_left(K_test_train.transpose());
      const Matrix beta = model.core.transpose() * S1;  // m_y x n_te
      return model.output_sketch->apply_adjoint(beta).transpose();
    }
  }
  throw std::logic_error("coefficients: bad variant");
}

}  // namespace skor
