#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bsvm/dataset.hpp"
#include "bsvm/errors.hpp"
#include "bsvm/preprocess.hpp"

namespace bsvm {

enum class Distance { euclidean };

/// Fraction-of-borderline-points summary. n1 is the share of vertices
/// incident to at least one cross-class edge of the Euclidean MST.
struct ComplexityReport {
  double n1 = 0.0;
  std::size_t mst_edge_count = 0;
  std::size_t cross_class_edges = 0;
};

/// Builds the MST over pairwise Euclidean distances (Prim, lowest-index
/// tie-break) and reports the borderline fraction. Distances are taken
/// on features standardized over the whole dataset, since the measure is
/// scale-sensitive.
inline ComplexityReport fraction_borderline(const Dataset& data,
                                            Distance distance = Distance::euclidean) {
  (void)distance;  // single metric today
  const std::size_t n = data.n();
  if (n < 2) throw DataError("fraction_borderline: need at least 2 samples");

  const Matrix X = fit_scaler(data.features).apply(data.features);

  auto dist = [&](std::size_t a, std::size_t b) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < X.cols(); ++k) {
      const double d = X(a, k) - X(b, k);
      d2 += d * d;
    }
    return std::sqrt(d2);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<bool> in_tree(n, false);
  std::vector<double> key(n, inf);
  std::vector<std::size_t> parent(n, n);
  key[0] = 0.0;

  std::vector<bool> incident(n, false);
  ComplexityReport report;

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t v = n;
    double best = inf;
    for (std::size_t k = 0; k < n; ++k) {
      if (!in_tree[k] && key[k] < best) { best = key[k]; v = k; }
    }
    in_tree[v] = true;
    if (parent[v] != n) {
      ++report.mst_edge_count;
      if (data.labels[parent[v]] != data.labels[v]) {
        ++report.cross_class_edges;
        incident[parent[v]] = incident[v] = true;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (in_tree[k]) continue;
      const double d = dist(v, k);
      if (d < key[k]) { key[k] = d; parent[k] = v; }
    }
  }

  std::size_t touched = 0;
  for (bool b : incident) touched += b ? 1 : 0;
  report.n1 = static_cast<double>(touched) / static_cast<double>(n);
  return report;
}

}  // namespace bsvm
