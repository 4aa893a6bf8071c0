#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stretchy/polybasis.hpp"
#include "stretchy/solver.hpp"
#include "stretchy/transform.hpp"

namespace stretchy {

inline constexpr int kModelSchemaVersion = 1;
inline constexpr double kDefaultSparsityEps = 1e-3;

struct Provenance {
  std::string dataset_id;
  std::size_t m = 0;
  std::string timestamp;
};

/// A fitted predictor: optional first-quadrant transform, graded-lex basis,
/// solver settings and the coefficient vector aligned with the basis.
struct StretchyModel {
  std::optional<TransformParams> transform;
  MonomialBasis basis{1, 0};
  SolverConfig solver;
  Vector alpha;
  Provenance provenance;

  /// alpha length == basis size, finite alpha, q != 1, transform width == d.
  void validate() const;
};

struct TransformSettings {
  double a = 1.0;
  BMode b_mode = BMode::raw_mean;
  std::optional<std::vector<double>> custom_b;
};

struct FitOptions {
  std::size_t order = 1;
  SolverConfig solver;
  std::optional<TransformSettings> transform;  // nullopt: inputs used as-is
  std::string dataset_id;
};

struct FitResult {
  StretchyModel model;
  Solution solution;
  Eigen::Index terms = 0;
};

/// Fits the transform on x_train (if requested), expands and solves.
FitResult fit(const Matrix& x_train, const Vector& y_train, const FitOptions& options);

/// Design matrix of raw inputs under the model's transform and basis.
DesignMatrix design_matrix(const StretchyModel& model, const Matrix& x_raw);

Vector predict(const StretchyModel& model, const Matrix& x_raw);

struct ClassifierConfig {
  double tau = 0.0;
  int below = -1;
  int at_or_above = 1;
};

std::vector<int> classify(const Vector& scores, const ClassifierConfig& cfg);

struct EvalReport {
  double mse = 0.0;
  double std_err = 0.0;       // sample std of squared residuals / sqrt(n)
  double residual_std = 0.0;  // sample std of residuals
  std::size_t n = 0;
  Vector residuals;           // prediction - target
  std::size_t nnz = 0;        // |alpha_i| > sparsity_eps
};

EvalReport evaluate_predictions(const Vector& predicted, const Vector& target);
EvalReport evaluate(const StretchyModel& model, const Matrix& x_raw, const Vector& y,
                    double sparsity_eps = kDefaultSparsityEps);

std::size_t count_nonzero(const Vector& alpha, double eps = kDefaultSparsityEps);

std::string model_to_json(const StretchyModel& model);
StretchyModel model_from_json(const std::string& text);

void save_model(const StretchyModel& model, const std::filesystem::path& path);
StretchyModel load_model(const std::filesystem::path& path);

}  // namespace stretchy
