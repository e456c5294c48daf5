#pragma once

#include <optional>
#include <string>

#include "skor/kernels.hpp"
#include "skor/linalg.hpp"
#include "skor/sketch.hpp"
#include "skor/types.hpp"

namespace skor {

enum class Variant { iokr, siokr, isokr, sisokr };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct RidgeConfig {
  double lambda = 1e-6;  // penalty; the n-scaling (n*lambda) happens inside fit
  SolveOptions solve;

  void validate() const;
};

/// Dual-coefficient core of a fitted estimator plus the sketches needed at
/// predict time. Core shapes per variant:
///   iokr    n x n      (K_X + n*lambda*I)^-1
///   siokr   n x m_x    K_X R_x^T (R_x K_X^2 R_x^T + n*lambda*Kx~)^+
///   isokr   m_y x n    Ky~^+ R_y K_Y (K_X + n*lambda*I)^-1
///   sisokr  m_x x m_y  transpose of Ky~^+ R_y K_Y K_X R_x^T (R_x K_X^2 R_x^T + n*lambda*Kx~)^+
/// where Kz~ = R_z K_Z R_z^T.
struct FittedModel {
  Variant variant = Variant::iokr;
  Matrix core;
  std::optional<SketchOperator> input_sketch;
  std::optional<SketchOperator> output_sketch;
  Index n_train = 0;
  double lambda = 0.0;
};

FittedModel fit_iokr(const GramMatrix& K_X, const RidgeConfig& cfg);

FittedModel fit_siokr(const GramMatrix& K_X, const SketchOperator& R_x,
                      const RidgeConfig& cfg);

FittedModel fit_isokr(const GramMatrix& K_X, const GramMatrix& K_Y,
                      const SketchOperator& R_y, const RidgeConfig& cfg);

/// Input- and output-sketched fit. The input chain is evaluated as
/// G = R_x K_X, then G G^T, so the n x n product K_X^2 is never formed.
FittedModel fit_sisokr(const GramMatrix& K_X, const GramMatrix& K_Y,
                       const SketchOperator& R_x, const SketchOperator& R_y,
                       const RidgeConfig& cfg);

/// Materialized dual coefficients, one test point per row:
/// row t equals alpha(x_t)^T. K_test_train is the n_te x n cross-Gram.
Matrix coefficients(const FittedModel& model, const MatrixRef& K_test_train);

}  // namespace skor
