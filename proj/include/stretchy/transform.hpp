#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "stretchy/polybasis.hpp"

namespace stretchy {

/// How the per-column warp offset b is derived from the raw training means.
enum class BMode { zero, raw_mean, a_times_raw_mean, custom };

std::string_view to_string(BMode mode);
BMode parse_b_mode(std::string_view text);

/// Column statistics from the training rows plus the exponential warp
/// x -> exp(a * (x - mu) / sigma + b). Immutable once built.
struct TransformParams {
  std::vector<double> mu;     // raw training column means
  std::vector<double> sigma;  // sample std (denominator M - 1)
  double a = 1.0;
  std::vector<double> b;
  BMode b_mode = BMode::zero;

  std::size_t columns() const noexcept { return mu.size(); }
};

/// Column means and sample standard deviations. Requires M >= 2 and rejects
/// constant columns with Error(degenerate_column).
TransformParams fit_standardizer(const Matrix& x_train);

Matrix standardize(const Matrix& x, const TransformParams& params);
Matrix unstandardize(const Matrix& z, const TransformParams& params);

/// Elementwise exp(a * z + b_k). Non-finite output is an error.
Matrix quadrant_map(const Matrix& z, double a, const std::vector<double>& b);

std::vector<double> resolve_b(BMode mode, double a,
                              const std::vector<double>& raw_means,
                              const std::optional<std::vector<double>>& custom = {});

/// Fits the standardizer on `x_train` and resolves the warp settings.
TransformParams fit_transform(const Matrix& x_train, double a, BMode mode,
                              const std::optional<std::vector<double>>& custom_b = {});

/// standardize followed by quadrant_map, using only the stored parameters.
Matrix apply_transform(const Matrix& x, const TransformParams& params);

}  // namespace stretchy
