#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bsvm/errors.hpp"
#include "bsvm/matrix.hpp"

namespace bsvm {

struct SolverSettings {
  double kkt_tolerance = 1e-3;
  std::int64_t max_iterations = 10'000'000;
  enum class WorkingSetRule { max_violating_pair };
  WorkingSetRule working_set_rule = WorkingSetRule::max_violating_pair;
};

inline void validate(const SolverSettings& s) {
  if (s.kkt_tolerance <= 0.0) throw ConfigError("solver: kkt_tolerance must be positive");
  if (s.max_iterations < 1) throw ConfigError("solver: max_iterations must be >= 1");
}

/// Result of a dual solve. `objective` is the value of the minimized dual
/// (1/2 a'Qa - sum(a) for the C form, 1/2 a'Qa for the nu form).
struct DualSolution {
  std::vector<double> alphas;
  double objective = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  std::optional<double> rho;  // nu-SVM margin variable
};

namespace detail {

constexpr double kTau = 1e-12;

inline void check_two_classes(const std::vector<int>& y) {
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == +1) pos = true;
    else if (v == -1) neg = true;
    else throw DataError("labels must be +1 or -1");
  }
  if (!pos || !neg) throw DataError("training set must contain both classes");
}

inline void check_gram_labels(const Matrix& gram, const std::vector<int>& y) {
  if (gram.rows() != gram.cols()) throw DataError("gram matrix must be square");
  if (gram.rows() != y.size()) throw DataError("gram size does not match label count");
  check_two_classes(y);
}

// Minimizes the two-variable restriction for the selected pair and clips
// to the box while preserving sum(alpha .* y). Mirrors the classic SMO
// update; bound hits land exactly on 0 or C so bound tests stay exact.
inline void update_pair(const Matrix& K, const std::vector<int>& y,
                        const std::vector<double>& C, std::vector<double>& alpha,
                        std::vector<double>& grad, std::size_t i, std::size_t j) {
  const std::size_t n = y.size();
  double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
  if (quad <= 0.0) quad = kTau;

  const double old_ai = alpha[i];
  const double old_aj = alpha[j];

  if (y[i] != y[j]) {
    const double delta = (-grad[i] - grad[j]) / quad;
    const double diff = alpha[i] - alpha[j];
    alpha[i] += delta;
    alpha[j] += delta;
    if (diff > 0.0) {
      if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
    } else {
      if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
    }
    if (diff > C[i] - C[j]) {
      if (alpha[i] > C[i]) { alpha[i] = C[i]; alpha[j] = C[i] - diff; }
    } else {
      if (alpha[j] > C[j]) { alpha[j] = C[j]; alpha[i] = C[j] + diff; }
    }
  } else {
    const double delta = (grad[i] - grad[j]) / quad;
    const double sum = alpha[i] + alpha[j];
    alpha[i] -= delta;
    alpha[j] += delta;
    if (sum > C[i]) {
      if (alpha[i] > C[i]) { alpha[i] = C[i]; alpha[j] = sum - C[i]; }
    } else {
      if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
    }
    if (sum > C[j]) {
      if (alpha[j] > C[j]) { alpha[j] = C[j]; alpha[i] = sum - C[j]; }
    } else {
      if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
    }
  }

  const double dai = alpha[i] - old_ai;
  const double daj = alpha[j] - old_aj;
  for (std::size_t k = 0; k < n; ++k) {
    grad[k] += y[k] * (y[i] * K(k, i) * dai + y[j] * K(k, j) * daj);
  }
}

}  // namespace detail

/// SMO for the C-form dual:
///   min 1/2 sum_ij a_i a_j y_i y_j K_ij - sum_i a_i
///   s.t. sum_i a_i y_i = 0,  0 <= a_i <= penalties[i].
/// Working set: maximal violating pair, ties broken by lowest index.
/// Non-convergence within max_iterations is reported, not thrown.
inline DualSolution solve_c_svm_dual(const Matrix& gram, const std::vector<int>& labels,
                                     const std::vector<double>& penalties,
                                     const SolverSettings& settings = {}) {
  detail::check_gram_labels(gram, labels);
  validate(settings);
  if (penalties.size() != labels.size()) {
    throw DataError("penalty count does not match label count");
  }
  for (double c : penalties) {
    if (!(c > 0.0)) throw ConfigError("penalties must be positive");
  }

  const std::size_t n = labels.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual at alpha = 0

  DualSolution sol;
  const double inf = std::numeric_limits<double>::infinity();
  while (sol.iterations < settings.max_iterations) {
    // i maximizes -y*G over samples whose alpha can increase along +y,
    // j minimizes it over those that can decrease. Their gap bounds the
    // KKT violation.
    double m = -inf, M = inf;
    std::size_t i = n, j = n;
    for (std::size_t k = 0; k < n; ++k) {
      const bool up = (labels[k] == +1) ? (alpha[k] < penalties[k]) : (alpha[k] > 0.0);
      const bool low = (labels[k] == -1) ? (alpha[k] < penalties[k]) : (alpha[k] > 0.0);
      const double v = -labels[k] * grad[k];
      if (up && v > m) { m = v; i = k; }
      if (low && v < M) { M = v; j = k; }
    }
    if (i == n || j == n || m - M < settings.kkt_tolerance) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;
    detail::update_pair(gram, labels, penalties, alpha, grad, i, j);
  }

  double obj = 0.0;
  for (std::size_t k = 0; k < n; ++k) obj += alpha[k] * (grad[k] - 1.0);
  sol.objective = 0.5 * obj;
  sol.alphas = std::move(alpha);
  return sol;
}

/// Largest feasible nu for the given labels: 2*min(n+, n-)/n.
inline double nu_feasibility_bound(const std::vector<int>& labels) {
  std::size_t pos = 0, neg = 0;
  for (int v : labels) (v == +1 ? pos : neg)++;
  return 2.0 * static_cast<double>(std::min(pos, neg)) / static_cast<double>(labels.size());
}

/// SMO for the nu-form dual:
///   min 1/2 sum_ij a_i a_j y_i y_j K_ij
///   s.t. 0 <= a_i <= 1/n,  sum_i a_i y_i = 0,  sum_i a_i = nu
/// realized as per-class sums of nu/2. Pairs are selected within one
/// class, so both equality constraints are preserved. The returned rho
/// is the margin position: free vectors satisfy y*f = rho.
inline DualSolution solve_nu_svm_dual(const Matrix& gram, const std::vector<int>& labels,
                                      double nu, const SolverSettings& settings = {}) {
  detail::check_gram_labels(gram, labels);
  validate(settings);
  if (!(nu > 0.0) || nu > 1.0) throw ConfigError("nu must lie in (0, 1]");
  const double bound = nu_feasibility_bound(labels);
  if (nu > bound + 1e-12) throw NuInfeasibleError(nu, bound);

  const std::size_t n = labels.size();
  const double cap = 1.0 / static_cast<double>(n);

  // Initial feasible point: fill each class greedily up to nu/2.
  std::vector<double> alpha(n, 0.0);
  double left_pos = nu / 2.0, left_neg = nu / 2.0;
  for (std::size_t k = 0; k < n; ++k) {
    double& left = (labels[k] == +1) ? left_pos : left_neg;
    alpha[k] = std::min(cap, left);
    left -= alpha[k];
  }

  std::vector<double> grad(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double g = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (alpha[l] != 0.0) g += labels[k] * labels[l] * gram(k, l) * alpha[l];
    }
    grad[k] = g;
  }

  std::vector<double> caps(n, cap);
  DualSolution sol;
  const double inf = std::numeric_limits<double>::infinity();
  while (sol.iterations < settings.max_iterations) {
    // Per class: mass can move from a high-gradient donor (alpha > 0) to
    // a low-gradient receiver (alpha < cap).
    double best_viol = -inf;
    std::size_t bi = n, bj = n;
    for (int cls : {+1, -1}) {
      double gmin = inf, gmax = -inf;
      std::size_t i = n, j = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] != cls) continue;
        if (alpha[k] < cap && grad[k] < gmin) { gmin = grad[k]; i = k; }
        if (alpha[k] > 0.0 && grad[k] > gmax) { gmax = grad[k]; j = k; }
      }
      if (i == n || j == n) continue;
      const double viol = gmax - gmin;
      if (viol > best_viol) { best_viol = viol; bi = i; bj = j; }
    }
    if (bi == n || best_viol < settings.kkt_tolerance) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;
    detail::update_pair(gram, labels, caps, alpha, grad, bi, bj);
  }

  // Margin and bias from per-class gradient statistics: free +1 vectors
  // carry G = rho - b, free -1 vectors carry G = rho + b.
  double r[2];
  for (int c = 0; c < 2; ++c) {
    const int cls = (c == 0) ? +1 : -1;
    double lb = -inf, ub = inf, sum_free = 0.0;
    int n_free = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] != cls) continue;
      if (alpha[k] >= cap) lb = std::max(lb, grad[k]);
      else if (alpha[k] <= 0.0) ub = std::min(ub, grad[k]);
      else { ++n_free; sum_free += grad[k]; }
    }
    if (n_free > 0) r[c] = sum_free / n_free;
    else if (lb == -inf && ub == inf) r[c] = 0.0;
    else if (lb == -inf) r[c] = ub;
    else if (ub == inf) r[c] = lb;
    else r[c] = (lb + ub) / 2.0;
  }
  sol.rho = (r[0] + r[1]) / 2.0;

  double obj = 0.0;
  for (std::size_t k = 0; k < n; ++k) obj += alpha[k] * grad[k];
  sol.objective = 0.5 * obj;
  sol.alphas = std::move(alpha);
  return sol;
}

/// Bias recovered from a nu solve (see solve_nu_svm_dual for the gradient
/// identities). Kept separate so DualSolution stays a plain result.
inline double nu_bias(const Matrix& gram, const std::vector<int>& labels,
                      const DualSolution& sol) {
  const std::size_t n = labels.size();
  const double cap = 1.0 / static_cast<double>(n);
  const double inf = std::numeric_limits<double>::infinity();
  double r[2];
  for (int c = 0; c < 2; ++c) {
    const int cls = (c == 0) ? +1 : -1;
    double lb = -inf, ub = inf, sum_free = 0.0;
    int n_free = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (labels[k] != cls) continue;
      double g = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        g += labels[k] * labels[l] * gram(k, l) * sol.alphas[l];
      }
      if (sol.alphas[k] >= cap) lb = std::max(lb, g);
      else if (sol.alphas[k] <= 0.0) ub = std::min(ub, g);
      else { ++n_free; sum_free += g; }
    }
    if (n_free > 0) r[c] = sum_free / n_free;
    else if (lb == -inf && ub == inf) r[c] = 0.0;
    else if (lb == -inf) r[c] = ub;
    else if (ub == inf) r[c] = lb;
    else r[c] = (lb + ub) / 2.0;
  }
  return (r[1] - r[0]) / 2.0;
}

/// Kernel expansion u_i = sum_j a_j y_j K(i, j) (decision values without
/// the bias), for every row of the gram matrix.
inline std::vector<double> kernel_expansion(const Matrix& gram, const std::vector<int>& labels,
                                            const std::vector<double>& alphas) {
  const std::size_t n = labels.size();
  std::vector<double> u(gram.rows(), 0.0);
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (alphas[j] != 0.0) v += alphas[j] * labels[j] * gram(i, j);
    }
    u[i] = v;
  }
  return u;
}

/// Bias for a C-form solution: average offset over free vectors, falling
/// back to the midpoint of the feasible interval when none are free.
inline double recover_bias(const Matrix& gram, const std::vector<int>& labels,
                           const std::vector<double>& penalties,
                           const std::vector<double>& alphas) {
  const std::size_t n = labels.size();
  const std::vector<double> u = kernel_expansion(gram, labels, alphas);
  const double inf = std::numeric_limits<double>::infinity();
  double m = -inf, M = inf, sum_free = 0.0;
  int n_free = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double g = labels[k] * u[k] - 1.0;
    const double v = -labels[k] * g;
    const bool up = (labels[k] == +1) ? (alphas[k] < penalties[k]) : (alphas[k] > 0.0);
    const bool low = (labels[k] == -1) ? (alphas[k] < penalties[k]) : (alphas[k] > 0.0);
    if (alphas[k] > 0.0 && alphas[k] < penalties[k]) { ++n_free; sum_free += v; }
    if (up) m = std::max(m, v);
    if (low) M = std::min(M, v);
  }
  if (n_free > 0) return sum_free / n_free;
  if (m == -inf && M == inf) return 0.0;
  if (m == -inf) return M;
  if (M == inf) return m;
  return (m + M) / 2.0;
}

/// Maximum per-sample KKT violation of a C-form solution, with the bias
/// chosen to minimize it (midpoint of the feasible interval). Zero for an
/// exact optimum.
inline double kkt_violation_report(const Matrix& gram, const std::vector<int>& labels,
                                   const std::vector<double>& penalties,
                                   const DualSolution& solution) {
  detail::check_gram_labels(gram, labels);
  if (solution.alphas.size() != labels.size()) {
    throw DataError("solution dimension does not match gram matrix");
  }
  const std::size_t n = labels.size();
  const std::vector<double> u = kernel_expansion(gram, labels, solution.alphas);
  const double inf = std::numeric_limits<double>::infinity();

  double m = -inf, M = inf;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = -labels[k] * (labels[k] * u[k] - 1.0);
    const bool up = (labels[k] == +1) ? (solution.alphas[k] < penalties[k])
                                      : (solution.alphas[k] > 0.0);
    const bool low = (labels[k] == -1) ? (solution.alphas[k] < penalties[k])
                                       : (solution.alphas[k] > 0.0);
    if (up) m = std::max(m, v);
    if (low) M = std::min(M, v);
  }
  double b = 0.0;
  if (m == -inf && M == inf) b = 0.0;
  else if (m == -inf) b = M;
  else if (M == inf) b = m;
  else b = (m + M) / 2.0;

  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double margin = labels[k] * (u[k] + b);
    const double a = solution.alphas[k];
    double viol;
    if (a <= 0.0) viol = std::max(0.0, 1.0 - margin);
    else if (a >= penalties[k]) viol = std::max(0.0, margin - 1.0);
    else viol = std::abs(1.0 - margin);
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace bsvm
