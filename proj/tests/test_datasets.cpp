#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "stretchy/datasets.hpp"
#include "stretchy/error.hpp"
#include "stretchy/polybasis.hpp"

using namespace stretchy;

namespace {

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "expected stretchy::Error";
  return ErrorCategory::usage_error;
}

LoadOptions csv_options() {
  LoadOptions o;
  o.delimiter = ',';
  o.target_column = "y";
  o.split_column = "train";
  o.split_train_value = "T";
  return o;
}

}  // namespace

TEST(ParseDelimited, ToyCsv) {
  const auto d = parse_delimited("a,b,y,train\n1,2,3,T\n4,5,6,F\n", csv_options());
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.features(), 2u);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.x(1, 0), 4.0);
  EXPECT_EQ(d.y[1], 6.0);
  ASSERT_TRUE(d.split);
  EXPECT_EQ((*d.split)[0], SplitFlag::train);
  EXPECT_EQ((*d.split)[1], SplitFlag::test);
}

TEST(ParseDelimited, SkipsUnnamedIndexColumnAndHandlesCrlf) {
  const std::string text =
      "\tlcavol\tage\tlpsa\ttrain\r\n1\t-0.58\t50\t-0.43\tT\r\n2\t-0.99\t58\t-0.16\tF\r\n\n";
  const auto d = parse_delimited(text);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"lcavol", "age"}));
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_DOUBLE_EQ(d.x(0, 0), -0.58);
  EXPECT_DOUBLE_EQ(d.y[1], -0.16);
}

TEST(ParseDelimited, Errors) {
  const auto o = csv_options();
  try {
    (void)parse_delimited("a,b,y,train\n1,oops,3,T\n", o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::parse_error);
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
  }
  EXPECT_EQ(category_of([&] { (void)parse_delimited("a,b,y,train\n1,2,T\n", o); }),
            ErrorCategory::parse_error);
  EXPECT_EQ(category_of([&] { (void)parse_delimited("a,b,train\n1,2,T\n", o); }),
            ErrorCategory::parse_error);
  EXPECT_EQ(category_of([&] { (void)parse_delimited("", o); }), ErrorCategory::parse_error);
  EXPECT_EQ(category_of([&] { (void)parse_delimited("a,y,train\nnan,1,T\n", o); }),
            ErrorCategory::parse_error);
  EXPECT_EQ(category_of([] { (void)load_delimited("/nonexistent/file.tsv"); }), ErrorCategory::io_error);
}

TEST(ParseDelimited, Deterministic) {
  const std::string text = "a,b,y,train\n0.1,2e-3,3,T\n4,5,6,F\n";
  const auto a = parse_delimited(text, csv_options());
  const auto b = parse_delimited(text, csv_options());
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
}

TEST(Split, PreservesOrder) {
  const auto d = parse_delimited("a,y,train\n1,1,T\n2,2,F\n3,3,T\n4,4,F\n5,5,T\n", csv_options());
  const auto [train, test] = split(d);
  EXPECT_EQ(train.rows() + test.rows(), d.rows());
  EXPECT_EQ(train.x.col(0), (Vector(3) << 1, 3, 5).finished());
  EXPECT_EQ(test.y, (Vector(2) << 2, 4).finished());
}

TEST(Split, EdgeCases) {
  const auto all = parse_delimited("a,y,train\n1,1,T\n2,2,T\n", csv_options());
  const auto [train, test] = split(all);
  EXPECT_EQ(train.rows(), 2u);
  EXPECT_EQ(test.rows(), 0u);

  EXPECT_THROW((void)split(synthetic_three_points()), Error);
  Dataset empty;
  empty.split = std::vector<SplitFlag>{};
  EXPECT_THROW((void)split(empty), Error);
}

TEST(Synthetic, ThreePoints) {
  const auto d = synthetic_three_points();
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.features(), 2u);
  EXPECT_EQ(d.y, (Vector(3) << -1, 1, 1).finished());
  EXPECT_FALSE(d.split);
  EXPECT_TRUE((d.x.array() > 0.0).all());
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.x.row(i).sum(), d.y[i] < 0 ? 0.2 : 0.3, 1e-15);
  }
  EXPECT_LT(d.rows(), enumerate_basis(2, 3).size());
}

TEST(Prostate, LoadsAndSplits) {
  const auto path = find_prostate_data();
  if (!path) GTEST_SKIP() << "prostate data not found; see data/README.md";
  const auto d = load_delimited(*path);
  EXPECT_EQ(d.rows(), 97u);
  EXPECT_EQ(d.features(), 8u);
  const auto [train, test] = split(d);
  EXPECT_EQ(train.rows(), 67u);
  EXPECT_EQ(test.rows(), 30u);
}
