#include "skor/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace skor {

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian:
      return "gaussian";
    case KernelKind::linear:
      return "linear";
    case KernelKind::tanimoto_gaussian:
      return "tanimoto_gaussian";
    case KernelKind::precomputed:
      return "precomputed";
  }
  throw std::logic_error("kernel_kind_name: bad enum value");
}

KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "linear") return KernelKind::linear;
  if (name == "tanimoto_gaussian") return KernelKind::tanimoto_gaussian;
  if (name == "precomputed") return KernelKind::precomputed;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

KernelSpec KernelSpec::gaussian(double sigma2) {
  KernelSpec s;
  s.kind = KernelKind::gaussian;
  s.sigma2 = sigma2;
  s.validate();
  return s;
}

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.kind = KernelKind::linear;
  return s;
}

KernelSpec KernelSpec::tanimoto_gaussian(double sigma2) {
  KernelSpec s;
  s.kind = KernelKind::tanimoto_gaussian;
  s.sigma2 = sigma2;
  s.validate();
  return s;
}

KernelSpec KernelSpec::precomputed() {
  KernelSpec s;
  s.kind = KernelKind::precomputed;
  return s;
}

void KernelSpec::validate() const {
  const bool needs_width =
      kind == KernelKind::gaussian || kind == KernelKind::tanimoto_gaussian;
  if (needs_width && !(sigma2 > 0.0 && std::isfinite(sigma2))) {
    throw std::invalid_argument("kernel width sigma2 must be positive and finite");
  }
}

GramMatrix GramMatrix::from_values(Matrix values, bool symmetric) {
  if (!values.allFinite()) {
    throw std::invalid_argument("Gram values must be finite");
  }
  GramMatrix g;
  if (symmetric) {
    if (values.rows() != values.cols()) {
      throw std::invalid_argument("symmetric Gram must be square");
    }
    g.values = 0.5 * (values + values.transpose());
  } else {
    g.values = std::move(values);
  }
  g.symmetric = symmetric;
  if (g.values.rows() == g.values.cols()) g.diag = g.values.diagonal();
  return g;
}

namespace {

double tanimoto(const VectorRef& a, const VectorRef& b) {
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument(
        "tanimoto similarity is undefined for an all-zero vector");
  }
  const double ab = a.dot(b);
  return ab / (na + nb - ab);
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const VectorRef& a, const VectorRef& b) {
  spec.validate();
  if (a.size() != b.size()) {
    throw std::invalid_argument("eval_kernel: vectors of unequal dimension");
  }
  switch (spec.kind) {
    case KernelKind::gaussian:
      return std::exp(-(a - b).squaredNorm() / (2.0 * spec.sigma2));
    case KernelKind::linear:
      return a.dot(b);
    case KernelKind::tanimoto_gaussian:
      // Gaussian over the Tanimoto-induced squared distance 2 - 2T(a,b).
      return std::exp(-(2.0 - 2.0 * tanimoto(a, b)) / (2.0 * spec.sigma2));
    case KernelKind::precomputed:
      throw std::invalid_argument(
          "precomputed kernels cannot be evaluated pointwise");
  }
  throw std::logic_error("eval_kernel: bad enum value");
}

Matrix cross_gram(const KernelSpec& spec, const MatrixRef& A, const MatrixRef& B) {
  spec.validate();
  if (A.rows() == 0 || B.rows() == 0) {
    throw std::invalid_argument("cross_gram: empty sample set");
  }
  if (A.cols() != B.cols()) {
    throw std::invalid_argument("cross_gram: feature dimensions differ");
  }
  Matrix out(A.rows(), B.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < B.rows(); ++j) {
      out(i, j) = eval_kernel(spec, A.row(i).transpose(), B.row(j).transpose());
    }
  }
  return out;
}

GramMatrix gram(const KernelSpec& spec, const MatrixRef& A, const MatrixRef& B) {
  return GramMatrix::from_values(cross_gram(spec, A, B), /*symmetric=*/false);
}

GramMatrix gram(const KernelSpec& spec, const MatrixRef& A) {
  spec.validate();
  if (A.rows() == 0) {
    throw std::invalid_argument("gram: empty sample set");
  }
  const Index n = A.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = eval_kernel(spec, A.row(i).transpose(), A.row(i).transpose());
    for (Index j = i + 1; j < n; ++j) {
      const double v =
          eval_kernel(spec, A.row(i).transpose(), A.row(j).transpose());
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return GramMatrix::from_values(std::move(out), /*symmetric=*/true);
}

}  // namespace skor
