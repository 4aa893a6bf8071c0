#include "stretchy/transform.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "stretchy/error.hpp"

namespace stretchy {

namespace {

void check_columns(const Matrix& x, const TransformParams& params) {
  if (static_cast<std::size_t>(x.cols()) != params.columns()) {
    std::ostringstream os;
    os << "input has " << x.cols() << " columns but transform was fitted on "
       << params.columns();
    throw Error(ErrorCategory::dimension_mismatch, os.str());
  }
}

}  // namespace

std::string_view to_string(BMode mode) {
  switch (mode) {
    case BMode::zero: return "zero";
    case BMode::raw_mean: return "raw_mean";
    case BMode::a_times_raw_mean: return "a_times_raw_mean";
    case BMode::custom: return "custom";
  }
  return "zero";
}

BMode parse_b_mode(std::string_view text) {
  if (text == "zero") return BMode::zero;
  if (text == "raw_mean" || text == "raw-mean") return BMode::raw_mean;
  if (text == "a_times_raw_mean" || text == "a-raw-mean") return BMode::a_times_raw_mean;
  if (text == "custom") return BMode::custom;
  throw Error(ErrorCategory::invalid_argument, "unknown b mode '" + std::string(text) + "'");
}

TransformParams fit_standardizer(const Matrix& x_train) {
  const Eigen::Index m = x_train.rows();
  if (m < 2) {
    throw Error(ErrorCategory::invalid_argument,
                "standardizer needs at least 2 training rows");
  }
  TransformParams p;
  p.mu.resize(static_cast<std::size_t>(x_train.cols()));
  p.sigma.resize(p.mu.size());
  for (Eigen::Index k = 0; k < x_train.cols(); ++k) {
    const auto col = x_train.col(k);
    const double mean = col.mean();
    const double ss = (col.array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      std::ostringstream os;
      os << "column " << k << " has zero variance in the training rows";
      throw Error(ErrorCategory::degenerate_column, os.str());
    }
    p.mu[static_cast<std::size_t>(k)] = mean;
    p.sigma[static_cast<std::size_t>(k)] = sd;
  }
  p.b.assign(p.mu.size(), 0.0);
  return p;
}

Matrix standardize(const Matrix& x, const TransformParams& params) {
  check_columns(x, params);
  Matrix z(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    z.col(k) = (x.col(k).array() - params.mu[kk]) / params.sigma[kk];
  }
  return z;
}

Matrix unstandardize(const Matrix& z, const TransformParams& params) {
  check_columns(z, params);
  Matrix x(z.rows(), z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    x.col(k) = z.col(k).array() * params.sigma[kk] + params.mu[kk];
  }
  return x;
}

Matrix quadrant_map(const Matrix& z, double a, const std::vector<double>& b) {
  if (static_cast<std::size_t>(z.cols()) != b.size()) {
    throw Error(ErrorCategory::dimension_mismatch,
                "warp offset vector length does not match column count");
  }
  Matrix out(z.rows(), z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    const double bk = b[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const double v = std::exp(a * z(i, k) + bk);
      if (!std::isfinite(v) || !(v > 0.0)) {
        std::ostringstream os;
        os << "exponential warp is not finite and positive at row " << i
           << ", column " << k;
        throw Error(ErrorCategory::numeric_overflow, os.str());
      }
      out(i, k) = v;
    }
  }
  return out;
}

std::vector<double> resolve_b(BMode mode, double a,
                              const std::vector<double>& raw_means,
                              const std::optional<std::vector<double>>& custom) {
  switch (mode) {
    case BMode::zero:
      return std::vector<double>(raw_means.size(), 0.0);
    case BMode::raw_mean:
      return raw_means;
    case BMode::a_times_raw_mean: {
      std::vector<double> b(raw_means.size());
      for (std::size_t k = 0; k < b.size(); ++k) b[k] = a * raw_means[k];
      return b;
    }
    case BMode::custom:
      if (!custom || custom->size() != raw_means.size()) {
        std::ostringstream os;
        os << "custom b vector must have " << raw_means.size() << " entries, got "
           << (custom ? custom->size() : 0);
        throw Error(ErrorCategory::dimension_mismatch, os.str());
      }
      return *custom;
  }
  return {};
}

TransformParams fit_transform(const Matrix& x_train, double a, BMode mode,
                              const std::optional<std::vector<double>>& custom_b) {
  if (!std::isfinite(a)) {
    throw Error(ErrorCategory::invalid_argument, "warp scale a must be finite");
  }
  TransformParams p = fit_standardizer(x_train);
  p.a = a;
  p.b_mode = mode;
  p.b = resolve_b(mode, a, p.mu, custom_b);
  return p;
}

Matrix apply_transform(const Matrix& x, const TransformParams& params) {
  return quadrant_map(standardize(x, params), params.a, params.b);
}

}  // namespace stretchy
