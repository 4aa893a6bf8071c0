#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "stretchy/datasets.hpp"
#include "stretchy/error.hpp"
#include "stretchy/model.hpp"

using namespace stretchy;
namespace fs = std::filesystem;

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

StretchyModel constant_model(std::size_t d, std::size_t r, double c) {
  StretchyModel m;
  m.basis = enumerate_basis(d, r);
  m.alpha = Vector::Zero(static_cast<Eigen::Index>(m.basis.size()));
  m.alpha[0] = c;
  return m;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("stretchy_test_" + name);
}

}  // namespace

TEST(Predict, ConstantModel) {
  std::mt19937_64 rng(1);
  const Matrix x = oracle::random_positive(rng, 5, 3);
  const Vector g = predict(constant_model(3, 2, 1.25), x);
  EXPECT_TRUE((g.array() == 1.25).all());
}

TEST(Predict, IdentityBasis) {
  StretchyModel m;
  m.basis = enumerate_basis(1, 1);
  m.alpha = Vector(2);
  m.alpha << 0, 1;
  EXPECT_EQ(predict(m, Matrix::Constant(1, 1, 5.0))[0], 5.0);
}

TEST(Predict, InterpolatesTrainingData) {
  const Dataset data = synthetic_three_points();
  for (double q : {2.0, 1.5, 1.1}) {
    FitOptions opts{3, {q, 0.0, SolveMode::automatic}, std::nullopt, data.id};
    const FitResult fr = fit(data.x, data.y, opts);
    EXPECT_EQ(fr.solution.mode, SolveMode::dual);
    EXPECT_LT((predict(fr.model, data.x) - data.y).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Predict, AffineInAlpha) {
  std::mt19937_64 rng(2);
  const Matrix x = oracle::random_positive(rng, 6, 2);
  StretchyModel a = constant_model(2, 3, 0.0);
  StretchyModel b = a;
  StretchyModel sum = a;
  a.alpha = oracle::random_vector(rng, 10);
  b.alpha = oracle::random_vector(rng, 10);
  sum.alpha = a.alpha + b.alpha;
  EXPECT_LT((predict(sum, x) - predict(a, x) - predict(b, x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Predict, ColumnMismatch) {
  EXPECT_EQ(category_of([] { (void)predict(constant_model(2, 1, 0.0), Matrix::Ones(2, 3)); }),
            ErrorCategory::dimension_mismatch);
}

TEST(Classify, Examples) {
  Vector s(3);
  s << -0.2, 0.0, 0.3;
  EXPECT_EQ(classify(s, {0.0, -1, 1}), (std::vector<int>{-1, 1, 1}));
  EXPECT_EQ(classify(s, {1e300, -1, 1}), (std::vector<int>{-1, -1, -1}));
  EXPECT_EQ(classify(s, {0.0, 0, 1}), (std::vector<int>{0, 1, 1}));
  EXPECT_THROW((void)classify(s, {0.0, 1, 1}), Error);
}

TEST(Classify, SyntheticLabelsReproduced) {
  const Dataset data = synthetic_three_points();
  const FitResult fr = fit(data.x, data.y, {3, {1.3, 0.0, SolveMode::automatic}, std::nullopt, ""});
  const auto labels = classify(predict(fr.model, data.x), {0.0, -1, 1});
  EXPECT_EQ(labels, (std::vector<int>{-1, 1, 1}));
}

TEST(Classify, InvariantUnderMonotoneMaps) {
  std::mt19937_64 rng(3);
  const Vector s = oracle::random_vector(rng, 50);
  for (double tau : {-1.0, 0.0, 0.7}) {
    const auto base = classify(s, {tau, -1, 1});
    const Vector e = s.array().exp();
    EXPECT_EQ(classify(e, {std::exp(tau), -1, 1}), base);
    const Vector c = s.array().cube() * 3.0 + 1.0;
    EXPECT_EQ(classify(c, {tau * tau * tau * 3.0 + 1.0, -1, 1}), base);
  }
}

TEST(Evaluate, Examples) {
  Vector y(2);
  y << 1, 2;
  const auto exact = evaluate_predictions(y, y);
  EXPECT_EQ(exact.mse, 0.0);
  EXPECT_EQ(exact.std_err, 0.0);

  Vector r1(2);
  r1 << 2, 1;  // residuals (1, -1)
  const auto a = evaluate_predictions(r1, y);
  EXPECT_DOUBLE_EQ(a.mse, 1.0);
  EXPECT_DOUBLE_EQ(a.std_err, 0.0);
  EXPECT_EQ(a.n, 2u);

  Vector r2(2);
  r2 << 1, 4;  // residuals (0, 2)
  const auto b = evaluate_predictions(r2, y);
  EXPECT_DOUBLE_EQ(b.mse, 2.0);
  // Squared residuals {0, 4}: sample std 2*sqrt(2), over sqrt(2) gives 2.
  EXPECT_NEAR(b.std_err, 2.0, 1e-15);
  EXPECT_NEAR(b.residual_std, std::sqrt(2.0), 1e-15);

  EXPECT_EQ(category_of([] { (void)evaluate_predictions(Vector(), Vector()); }),
            ErrorCategory::invalid_argument);
  EXPECT_EQ(category_of([&] { (void)evaluate_predictions(Vector::Ones(3), y); }),
            ErrorCategory::dimension_mismatch);
}

TEST(Evaluate, ZeroPredictorMse) {
  std::mt19937_64 rng(4);
  const Matrix x = oracle::random_positive(rng, 12, 2);
  const Vector y = oracle::random_vector(rng, 12);
  const auto rep = evaluate(constant_model(2, 2, 0.0), x, y);
  EXPECT_NEAR(rep.mse, y.squaredNorm() / 12.0, 1e-15);
  EXPECT_EQ(rep.nnz, 0u);
  EXPECT_EQ(static_cast<std::size_t>(rep.residuals.size()), rep.n);
}

TEST(Evaluate, NonzeroCount) {
  Vector a(5);
  a << 1e-4, -2e-3, 0.0, 0.5, -1e-3;
  EXPECT_EQ(count_nonzero(a), 2u);
  EXPECT_EQ(count_nonzero(a, 1e-5), 4u);
}

TEST(Fit, WithTransform) {
  std::mt19937_64 rng(5);
  const Matrix x = oracle::random_positive(rng, 30, 3, -5.0, 5.0);
  const Vector y = oracle::random_vector(rng, 30);
  FitOptions opts{2, {1.5, 0.0, SolveMode::automatic}, TransformSettings{1.0, BMode::raw_mean, {}}, "rand"};
  const FitResult fr = fit(x, y, opts);
  EXPECT_EQ(fr.terms, 10);
  EXPECT_EQ(fr.solution.mode, SolveMode::primal);
  ASSERT_TRUE(fr.model.transform);
  EXPECT_EQ(fr.model.transform->b, fr.model.transform->mu);
  EXPECT_EQ(fr.model.provenance.m, 30u);
  EXPECT_EQ(fr.model.provenance.dataset_id, "rand");
}

TEST(Serialization, RoundTripIsBitwise) {
  std::mt19937_64 rng(6);
  const Matrix x = oracle::random_positive(rng, 25, 3, -2.0, 4.0);
  const Vector y = oracle::random_vector(rng, 25);
  FitOptions opts{2, {1.3, 1e-3, SolveMode::automatic}, TransformSettings{0.7, BMode::a_times_raw_mean, {}}, "rt"};
  const FitResult fr = fit(x, y, opts);
  const auto path = temp_file("roundtrip.json");
  save_model(fr.model, path);
  const StretchyModel back = load_model(path);
  EXPECT_EQ(back.alpha, fr.model.alpha);
  EXPECT_EQ(back.transform->mu, fr.model.transform->mu);
  const Matrix probe = oracle::random_positive(rng, 40, 3, -3.0, 5.0);
  EXPECT_EQ(predict(back, probe), predict(fr.model, probe));
  fs::remove(path);
}

TEST(Serialization, DocumentShape) {
  const auto doc = nlohmann::json::parse(model_to_json(constant_model(2, 3, 1.0)));
  EXPECT_EQ(doc["schema_version"], kModelSchemaVersion);
  EXPECT_TRUE(doc["transform"].is_null());
  EXPECT_EQ(doc["basis"]["ordering"], "graded_lex");
  EXPECT_EQ(doc["basis"]["d"], 2);
  EXPECT_EQ(doc["basis"]["r"], 3);
  EXPECT_EQ(doc["solver"]["mode"], "auto");
  EXPECT_EQ(doc["alpha"].size(), 10u);
  EXPECT_TRUE(doc.contains("provenance"));
}

TEST(Serialization, Errors) {
  const std::string good = model_to_json(constant_model(2, 1, 1.0));
  EXPECT_EQ(category_of([&] { (void)model_from_json(good.substr(0, good.size() / 2)); }),
            ErrorCategory::parse_error);

  auto doc = nlohmann::json::parse(good);
  doc["alpha"].push_back(0.5);
  EXPECT_EQ(category_of([&] { (void)model_from_json(doc.dump()); }), ErrorCategory::validation_error);

  doc = nlohmann::json::parse(good);
  doc["schema_version"] = 99;
  EXPECT_EQ(category_of([&] { (void)model_from_json(doc.dump()); }), ErrorCategory::validation_error);

  doc = nlohmann::json::parse(good);
  doc["solver"]["q"] = 1.0;
  EXPECT_EQ(category_of([&] { (void)model_from_json(doc.dump()); }), ErrorCategory::invalid_argument);

  doc = nlohmann::json::parse(good);
  doc.erase("basis");
  EXPECT_EQ(category_of([&] { (void)model_from_json(doc.dump()); }), ErrorCategory::validation_error);

  EXPECT_EQ(category_of([] { (void)load_model("/nonexistent/model.json"); }), ErrorCategory::io_error);
}
