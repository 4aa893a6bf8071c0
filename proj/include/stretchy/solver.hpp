#pragma once

#include <string_view>

#include "stretchy/polybasis.hpp"

namespace stretchy {

enum class SolveMode { automatic, primal, dual };

std::string_view to_string(SolveMode mode);
SolveMode parse_solve_mode(std::string_view text);

/// Smallest allowed |q - 1|; closer values make the stretch exponent blow up.
inline constexpr double kMinStretchGap = 1e-6;
/// Condition estimates above this are reported as a warning.
inline constexpr double kWarnCondition = 1e12;
/// Condition estimates above this are rejected when lambda == 0.
inline constexpr double kMaxCondition = 1e15;

struct SolverConfig {
  double q = 2.0;
  double lambda = 0.0;
  SolveMode mode = SolveMode::automatic;

  /// Throws Error(invalid_argument) for |q - 1| < kMinStretchGap, a
  /// non-finite q or a negative/non-finite lambda.
  void validate() const;
};

/// Coefficients plus the diagnostics of the linear solve that produced them.
struct Solution {
  Vector alpha;
  SolveMode mode = SolveMode::dual;  // path actually taken
  double condition = 0.0;            // 1-norm condition estimate of the system
  bool ill_conditioned = false;      // condition > kWarnCondition
};

/// 1 / (q - 1).
double stretch_exponent(double q);

/// Entrywise a^e. Fractional exponents need non-negative entries, negative
/// exponents need non-zero entries; violations raise Error(domain_error).
/// Non-finite results raise Error(numeric_overflow).
Matrix elementwise_power(const Matrix& a, double e);

/// alpha = Q (P Q + lambda I_M)^-1 y with Q = (P^T)^{1/(q-1)} elementwise.
Solution solve_dual(const Matrix& p, const Vector& y, const SolverConfig& cfg);

/// alpha = (Q P + lambda I_D)^-1 Q y with Q = (P^T)^{1/(q-1)} elementwise.
Solution solve_primal(const Matrix& p, const Vector& y, const SolverConfig& cfg);

/// Dispatches on cfg.mode; automatic picks dual when M < D, primal otherwise.
Solution solve(const Matrix& p, const Vector& y, const SolverConfig& cfg);

inline Solution solve(const DesignMatrix& p, const Vector& y, const SolverConfig& cfg) {
  return solve(p.values, y, cfg);
}

}  // namespace stretchy
