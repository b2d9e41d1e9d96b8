#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "bsvm/dataset.hpp"
#include "bsvm/errors.hpp"
#include "bsvm/rng.hpp"

namespace bsvm {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified split indices. Per class, round(ratio * n_class) samples
/// (half up) go to the training side; both sides come back sorted by
/// original row index. Deterministic for a fixed seed.
inline SplitIndices stratified_split_indices(const std::vector<int>& labels, double ratio,
                                             std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");

  SplitIndices out;
  Rng rng(seed);
  for (int cls : {+1, -1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    if (idx.size() < 2) {
      throw DataError("class " + std::string(cls == +1 ? "+1" : "-1") +
                      " has fewer than 2 samples, cannot stratify");
    }
    const auto want =
        static_cast<std::size_t>(std::floor(ratio * static_cast<double>(idx.size()) + 0.5));
    if (want == 0) {
      throw DataError("class too small to stratify at ratio " + std::to_string(ratio));
    }
    rng.shuffle(idx);
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + want);
    out.test.insert(out.test.end(), idx.begin() + want, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

inline std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double ratio,
                                                    std::uint64_t seed) {
  const SplitIndices idx = stratified_split_indices(data.labels, ratio, seed);
  return {data.take_rows(idx.train), data.take_rows(idx.test)};
}

/// Balanced-frequency class weights w_c = n / (k * n_c) with k = 2.
inline std::map<int, double> class_weights(const Dataset& data) {
  const auto n_pos = data.count(+1);
  const auto n_neg = data.count(-1);
  if (n_pos == 0 || n_neg == 0) throw DataError("class weights need both classes present");
  const double n = static_cast<double>(data.n());
  return {{+1, n / (2.0 * static_cast<double>(n_pos))},
          {-1, n / (2.0 * static_cast<double>(n_neg))}};
}

/// Per-feature affine transform fitted on training data. Zero-variance
/// features pass through unscaled (mean 0, stddev 1).
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw DataError("scaler: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stddev[j];
    return out;
  }

  Matrix apply(const Matrix& X) const {
    if (X.cols() != mean.size()) throw DataError("scaler: dimension mismatch");
    Matrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i) {
      for (std::size_t j = 0; j < X.cols(); ++j) {
        out(i, j) = (X(i, j) - mean[j]) / stddev[j];
      }
    }
    return out;
  }

  Dataset apply(const Dataset& d) const {
    Dataset out = d;
    out.features = apply(d.features);
    return out;
  }
};

/// Sample (ddof = 1) mean/stddev per feature.
inline Scaler fit_scaler(const Matrix& train) {
  if (train.rows() == 0) throw DataError("scaler: empty training data");
  const std::size_t n = train.rows(), d = train.cols();
  Scaler s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += train(i, j);
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = train(i, j) - m;
      ss += c * c;
    }
    const double sd = (n > 1) ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd > 1e-12 * std::max(1.0, std::abs(m))) {
      s.mean[j] = m;
      s.stddev[j] = sd;
    }  // else pass-through
  }
  return s;
}

/// Fits the scaler on train only and applies it to both sides.
inline std::tuple<Dataset, Dataset, Scaler> standardize(const Dataset& train,
                                                        const Dataset& test) {
  const Scaler s = fit_scaler(train.features);
  return {s.apply(train), s.apply(test), s};
}

}  // namespace bsvm
