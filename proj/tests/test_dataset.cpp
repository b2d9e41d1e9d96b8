#include <catch2/catch_amalgamated.hpp>

#include "bsvm/dataset.hpp"
#include "support/tmpdir.hpp"

using bsvm::CsvOptions;
using bsvm::Dataset;
using bsvm::MissingPolicy;

TEST_CASE("labels map with the requested positive class") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "x,cls\n1,a\n2,a\n3,b\n");
  CsvOptions opt;
  opt.positive_label = "b";
  const Dataset d = bsvm::load_csv(p, opt);
  CHECK(d.labels == std::vector<int>{-1, -1, +1});
  CHECK(d.positive_label_name == "b");
  CHECK(d.feature_names == std::vector<std::string>{"x"});
  CHECK(d.source_id == "t");
}

TEST_CASE("minority class becomes the positive class by default") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "x,cls\n1,a\n2,a\n3,b\n4,a\n");
  const Dataset d = bsvm::load_csv(p);
  CHECK(d.positive_label_name == "b");
  CHECK(d.labels == std::vector<int>{-1, -1, +1, -1});
}

TEST_CASE("drop policy removes rows with missing cells") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "a,b,cls\n1,2,x\n3,?,y\n5,6,x\n7,8,y\n");
  const Dataset d = bsvm::load_csv(p);
  CHECK(d.n() == 3);

  CsvOptions imp;
  imp.missing_policy = MissingPolicy::impute;
  const Dataset di = bsvm::load_csv(p, imp);
  CHECK(di.n() == 4);
  // mean of the observed b column: (2 + 6 + 8)/3
  CHECK_THAT(di.features(1, 1), Catch::Matchers::WithinRel(16.0 / 3.0, 1e-12));
}

TEST_CASE("symbolic columns one-hot encode with rows summing to one") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "sym,cls\nx,a\ny,b\nz,a\nx,b\n");
  const Dataset d = bsvm::load_csv(p);
  REQUIRE(d.feature_names == std::vector<std::string>{"sym=x", "sym=y", "sym=z"});
  for (std::size_t i = 0; i < d.n(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      sum += d.features(i, j);
      CHECK((d.features(i, j) == 0.0 || d.features(i, j) == 1.0));
    }
    CHECK(sum == 1.0);
  }
}

TEST_CASE("label column can be chosen by name") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "cls,x\na,1\nb,2\na,3\n");
  CsvOptions opt;
  opt.label_column = "cls";
  const Dataset d = bsvm::load_csv(p, opt);
  CHECK(d.feature_names == std::vector<std::string>{"x"});
  CHECK(d.count(+1) == 1);

  CsvOptions bad;
  bad.label_column = "nope";
  CHECK_THROWS_AS(bsvm::load_csv(p, bad), bsvm::DataError);
}

TEST_CASE("quoted cells keep embedded delimiters") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "sym,cls\n\"u,v\",a\nw,b\n\"u,v\",a\n");
  const Dataset d = bsvm::load_csv(p);
  CHECK(d.feature_names == std::vector<std::string>{"sym=u,v", "sym=w"});
}

TEST_CASE("alternative delimiter") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "x;cls\n1;a\n2;b\n3;a\n");
  CsvOptions opt;
  opt.delimiter = ';';
  const Dataset d = bsvm::load_csv(p, opt);
  CHECK(d.n() == 3);
  CHECK(d.features(2, 0) == 3.0);
}

TEST_CASE("more than two classes is rejected") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "x,cls\n1,a\n2,b\n3,c\n");
  CHECK_THROWS_AS(bsvm::load_csv(p), bsvm::DataError);
}

TEST_CASE("empty result and missing file are rejected") {
  testutil::TempDir tmp;
  const auto p = tmp.write("t.csv", "x,cls\n?,a\n?,b\n");
  CHECK_THROWS_AS(bsvm::load_csv(p), bsvm::DataError);
  CHECK_THROWS_AS(bsvm::load_csv(tmp.path() / "absent.csv"), bsvm::DataError);
}

TEST_CASE("manifest drives batch loading") {
  testutil::TempDir tmp;
  tmp.write("one.csv", "x,cls\n1,a\n2,b\n3,a\n");
  const auto m = tmp.write("manifest.json",
                           R"([{"path": "one.csv", "positive_label": "a",
                                "missing_policy": "impute"}])");
  const auto entries = bsvm::load_manifest(m);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].options.positive_label == "a");
  CHECK(entries[0].options.missing_policy == MissingPolicy::impute);
  const Dataset d = bsvm::load_csv(entries[0].path, entries[0].options);
  CHECK(d.count(+1) == 2);

  const auto bad = tmp.write("bad.json", R"({"not": "an array"})");
  CHECK_THROWS_AS(bsvm::load_manifest(bad), bsvm::DataError);
}
