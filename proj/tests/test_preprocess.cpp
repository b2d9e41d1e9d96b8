#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "bsvm/preprocess.hpp"
#include "bsvm/rng.hpp"

using bsvm::Dataset;
using bsvm::Matrix;

namespace {

Dataset toy(std::size_t n_pos, std::size_t n_neg) {
  Dataset d;
  bsvm::Rng rng(3);
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    d.features.append_row(std::vector<double>{rng.uniform(), rng.uniform()});
    d.labels.push_back(i < n_pos ? +1 : -1);
  }
  d.feature_names = {"f0", "f1"};
  return d;
}

}  // namespace

TEST_CASE("stratified split follows the per-class rounding rule") {
  // 2 minority + 8 majority at ratio 0.8: round(1.6) = 2, round(6.4) = 6
  const Dataset d = toy(2, 8);
  const auto idx = bsvm::stratified_split_indices(d.labels, 0.8, 42);
  CHECK(idx.train.size() == 8);
  CHECK(idx.test.size() == 2);
  std::size_t train_pos = 0;
  for (auto i : idx.train) train_pos += d.labels[i] == +1 ? 1 : 0;
  CHECK(train_pos == 2);
}

TEST_CASE("split is deterministic under a fixed seed") {
  const Dataset d = toy(5, 9);
  const auto a = bsvm::stratified_split_indices(d.labels, 0.7, 7);
  const auto b = bsvm::stratified_split_indices(d.labels, 0.7, 7);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  const auto c = bsvm::stratified_split_indices(d.labels, 0.7, 8);
  CHECK(a.train != c.train);  // different seed shuffles differently
}

TEST_CASE("split always partitions the index set") {
  bsvm::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_pos = 2 + rng.index(20);
    const std::size_t n_neg = 2 + rng.index(20);
    const Dataset d = toy(n_pos, n_neg);
    const double ratio = rng.uniform(0.3, 0.9);
    bsvm::SplitIndices idx;
    try {
      idx = bsvm::stratified_split_indices(d.labels, ratio, rng.next());
    } catch (const bsvm::DataError&) {
      continue;  // rounding left a class empty on the train side
    }
    std::set<std::size_t> all(idx.train.begin(), idx.train.end());
    for (auto i : idx.test) {
      CHECK(!all.contains(i));
      all.insert(i);
    }
    CHECK(all.size() == d.n());
    CHECK(*all.rbegin() == d.n() - 1);

    // per-class proportions within one sample of the global ratio
    for (int cls : {+1, -1}) {
      const double n_cls = static_cast<double>(d.count(cls));
      double got = 0;
      for (auto i : idx.train) got += d.labels[i] == cls ? 1 : 0;
      CHECK(std::abs(got - ratio * n_cls) <= 0.5 + 1e-9);
    }
  }
}

TEST_CASE("classes too small to stratify are rejected") {
  Dataset d = toy(1, 5);
  CHECK_THROWS_AS(bsvm::stratified_split_indices(d.labels, 0.8, 1), bsvm::DataError);
  Dataset e = toy(2, 5);
  CHECK_THROWS_AS(bsvm::stratified_split_indices(e.labels, 0.2, 1), bsvm::DataError);
}

TEST_CASE("class weights follow the balanced-frequency formula") {
  const Dataset d = toy(20, 80);
  const auto w = bsvm::class_weights(d);
  CHECK(w.at(+1) == 2.5);
  CHECK(w.at(-1) == 0.625);
  // weighted sample mass equals n exactly on this fixture
  double total = 0.0;
  for (int y : d.labels) total += w.at(y);
  CHECK(total == 100.0);

  const Dataset bal = toy(16, 16);
  const auto wb = bsvm::class_weights(bal);
  CHECK(wb.at(+1) == 1.0);
  CHECK(wb.at(-1) == 1.0);
}

TEST_CASE("weight ratio reproduces the imbalance ratio") {
  const Dataset d = toy(20, 37);  // IR = 1.85
  const auto w = bsvm::class_weights(d);
  CHECK_THAT(w.at(+1) / w.at(-1), Catch::Matchers::WithinRel(37.0 / 20.0, 1e-12));
  CHECK_THAT(w.at(+1) / w.at(-1), Catch::Matchers::WithinAbs(1.80, 0.06));
}

TEST_CASE("weighted mass equals n within fp tolerance on random sizes") {
  bsvm::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = toy(2 + rng.index(40), 2 + rng.index(40));
    const auto w = bsvm::class_weights(d);
    double total = 0.0;
    for (int y : d.labels) total += w.at(y);
    CHECK_THAT(total, Catch::Matchers::WithinRel(static_cast<double>(d.n()), 1e-9));
  }
}

TEST_CASE("standardize uses sample stddev computed on train only") {
  Dataset train;
  train.features = Matrix{{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}};
  train.labels = {+1, -1, +1};
  Dataset test;
  test.features = Matrix{{2.0, 7.0}};
  test.labels = {+1};

  const auto [tr, te, scaler] = bsvm::standardize(train, test);
  CHECK_THAT(tr.features(0, 0), Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK_THAT(tr.features(1, 0), Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK_THAT(tr.features(2, 0), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // constant column passes through unscaled
  CHECK(tr.features(0, 1) == 5.0);
  CHECK(te.features(0, 1) == 7.0);
  // test row at the train mean maps to zero
  CHECK_THAT(te.features(0, 0), Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK(scaler.mean.size() == 2);
}

TEST_CASE("standardized train columns have mean 0 and sample stddev 1") {
  bsvm::Rng rng(55);
  Dataset train;
  for (int i = 0; i < 40; ++i) {
    train.features.append_row(
        std::vector<double>{rng.normal(3.0, 2.5), rng.uniform(-10, 10)});
    train.labels.push_back(i % 2 == 0 ? +1 : -1);
  }
  const auto scaler = bsvm::fit_scaler(train.features);
  const Matrix Z = scaler.apply(train.features);
  for (std::size_t j = 0; j < Z.cols(); ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < Z.rows(); ++i) m += Z(i, j);
    m /= static_cast<double>(Z.rows());
    double ss = 0.0;
    for (std::size_t i = 0; i < Z.rows(); ++i) ss += (Z(i, j) - m) * (Z(i, j) - m);
    const double sd = std::sqrt(ss / static_cast<double>(Z.rows() - 1));
    CHECK_THAT(m, Catch::Matchers::WithinAbs(0.0, 1e-10));
    CHECK_THAT(sd, Catch::Matchers::WithinAbs(1.0, 1e-10));
  }
}
