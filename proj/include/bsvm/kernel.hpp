#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "bsvm/errors.hpp"
#include "bsvm/matrix.hpp"

namespace bsvm {

enum class KernelKind { linear, polynomial, rbf };

inline std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
    case KernelKind::rbf: return "rbf";
  }
  return "?";
}

inline KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "linear") return KernelKind::linear;
  if (s == "polynomial" || s == "poly") return KernelKind::polynomial;
  if (s == "rbf") return KernelKind::rbf;
  throw ConfigError("unknown kernel kind: " + s);
}

/// Kernel selection and parameters. gamma left unset means "resolve from
/// the training data" (see scale_gamma); evaluation requires a concrete
/// value for rbf and polynomial kernels.
struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  std::optional<double> gamma;  // rbf width / polynomial scale
  int degree = 3;               // polynomial only
  double coef0 = 0.0;           // polynomial offset

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

inline void validate(const KernelSpec& spec) {
  if (spec.kind == KernelKind::rbf || spec.kind == KernelKind::polynomial) {
    if (!spec.gamma.has_value()) {
      throw ConfigError("kernel: gamma is required for " + to_string(spec.kind));
    }
    if (*spec.gamma <= 0.0) {
      throw ConfigError("kernel: gamma must be positive, got " + std::to_string(*spec.gamma));
    }
  }
  if (spec.kind == KernelKind::polynomial && spec.degree < 1) {
    throw ConfigError("kernel: polynomial degree must be >= 1, got " +
                      std::to_string(spec.degree));
  }
}

/// The "scale" heuristic: 1 / (d * Var(X)), variance pooled over every
/// matrix entry. Falls back to 1/d for constant data.
inline double scale_gamma(const Matrix& X) {
  const double d = static_cast<double>(X.cols());
  if (X.rows() == 0 || X.cols() == 0) return 1.0;
  double mean = 0.0;
  for (double v : X.data()) mean += v;
  mean /= static_cast<double>(X.data().size());
  double var = 0.0;
  for (double v : X.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(X.data().size());
  if (var <= 0.0) return 1.0 / d;
  return 1.0 / (d * var);
}

/// Returns a copy of spec with gamma filled in from X when unset.
inline KernelSpec resolve_kernel(const KernelSpec& spec, const Matrix& X) {
  KernelSpec out = spec;
  if (!out.gamma.has_value()) out.gamma = scale_gamma(X);
  validate(out);
  return out;
}

inline double eval_kernel(const KernelSpec& spec, std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("kernel: dimension mismatch (" + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()) + ")");
  }
  validate(spec);
  switch (spec.kind) {
    case KernelKind::linear: {
      double dot = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
      return dot;
    }
    case KernelKind::polynomial: {
      double dot = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
      return std::pow(*spec.gamma * dot + spec.coef0, spec.degree);
    }
    case KernelKind::rbf: {
      double d2 = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        d2 += diff * diff;
      }
      return std::exp(-*spec.gamma * d2);
    }
  }
  throw ConfigError("kernel: unhandled kind");
}

/// Dense Gram matrix G[i][j] = K(X[i], X[j]). The upper triangle is
/// computed and mirrored, so the result is exactly symmetric.
inline Matrix gram_matrix(const KernelSpec& spec, const Matrix& X) {
  if (X.rows() < 1) throw DataError("gram_matrix: need at least one row");
  validate(spec);
  const std::size_t n = X.rows();
  Matrix G(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = eval_kernel(spec, X.row(i), X.row(j));
      G(i, j) = v;
      G(j, i) = v;
    }
  }
  return G;
}

}  // namespace bsvm
