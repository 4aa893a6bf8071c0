#include "stretchy/measures.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "stretchy/error.hpp"

namespace stretchy {

double lp_norm(std::span<const double> v, double p) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCategory::invalid_argument,
                "p-norm requires p >= 1; use the q-space measures below 1");
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

double qtilde_measure(std::span<const double> v, double q) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), q);
  return std::sqrt(s);
}

double qspace_measure(std::span<const double> v, double q) {
  const bool integral = std::floor(q) == q;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!integral && v[i] < 0.0) {
      std::ostringstream os;
      os << "component " << i << " = " << v[i] << " has no real power " << q;
      throw Error(ErrorCategory::domain_error, os.str());
    }
    s += std::pow(v[i], q);
  }
  if (s < 0.0) {
    throw Error(ErrorCategory::domain_error, "q-space sum is negative; square root undefined");
  }
  return std::sqrt(s);
}

std::string_view to_string(MeasureSpace space) {
  switch (space) {
    case MeasureSpace::lp: return "lp";
    case MeasureSpace::qtilde: return "qtilde";
    case MeasureSpace::qspace: return "qspace";
    case MeasureSpace::qspace_squared: return "qspace2";
  }
  return "lp";
}

MeasureSpace parse_measure_space(std::string_view text) {
  if (text == "lp") return MeasureSpace::lp;
  if (text == "qtilde") return MeasureSpace::qtilde;
  if (text == "qspace" || text == "q") return MeasureSpace::qspace;
  if (text == "qspace2" || text == "q2") return MeasureSpace::qspace_squared;
  throw Error(ErrorCategory::invalid_argument, "unknown measure space '" + std::string(text) + "'");
}

double measure_at(MeasureSpace space, double exponent, double x1, double x2) {
  const std::array<double, 2> v{x1, x2};
  try {
    switch (space) {
      case MeasureSpace::lp: return lp_norm(v, exponent);
      case MeasureSpace::qtilde: return qtilde_measure(v, exponent);
      case MeasureSpace::qspace: return qspace_measure(v, exponent);
      case MeasureSpace::qspace_squared: {
        const double m = qspace_measure(v, exponent);
        return m * m;
      }
    }
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::domain_error) throw;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<GridPoint> contour_grid(MeasureSpace space, double exponent,
                                    double lo, double hi, std::size_t steps) {
  if (steps < 2 || !std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCategory::invalid_argument,
                "contour grid needs steps >= 2 and finite bounds with min < max");
  }
  if (space == MeasureSpace::lp && !(exponent >= 1.0)) {
    throw Error(ErrorCategory::invalid_argument, "p-norm grid requires p >= 1");
  }
  std::vector<GridPoint> grid;
  grid.reserve(steps * steps);
  const double h = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double x1 = i + 1 == steps ? hi : lo + h * static_cast<double>(i);
    for (std::size_t j = 0; j < steps; ++j) {
      const double x2 = j + 1 == steps ? hi : lo + h * static_cast<double>(j);
      grid.push_back({x1, x2, measure_at(space, exponent, x1, x2)});
    }
  }
  return grid;
}

}  // namespace stretchy
