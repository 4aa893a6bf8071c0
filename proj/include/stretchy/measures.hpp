#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace stretchy {

/// (sum |v_i|^p)^(1/p), p >= 1.
double lp_norm(std::span<const double> v, double p);

/// (sum |v_i|^q)^(1/2). Defined for every real q on finite input
/// (zero components with q <= 0 give +inf).
double qtilde_measure(std::span<const double> v, double q);

/// (sum v_i^q)^(1/2) without absolute values. Not a norm: it fails the
/// scaling property. Negative components with fractional q, or a negative
/// sum, raise Error(domain_error).
double qspace_measure(std::span<const double> v, double q);

enum class MeasureSpace { lp, qtilde, qspace, qspace_squared };

std::string_view to_string(MeasureSpace space);
MeasureSpace parse_measure_space(std::string_view text);

/// Evaluates a measure at a single 2-D point; domain errors become NaN.
double measure_at(MeasureSpace space, double exponent, double x1, double x2);

struct GridPoint {
  double x1;
  double x2;
  double value;  // NaN where the measure is undefined
};

/// steps x steps points over [lo, hi]^2, x2 varying fastest.
std::vector<GridPoint> contour_grid(MeasureSpace space, double exponent,
                                    double lo, double hi, std::size_t steps);

}  // namespace stretchy
