#include "stretchy/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "stretchy/error.hpp"

namespace stretchy {

namespace {

bool is_integer(double e) {
  return std::isfinite(e) && std::floor(e) == e && std::fabs(e) < 9.0e15;
}

void check_inputs(const Matrix& p, const Vector& y, const SolverConfig& cfg) {
  cfg.validate();
  if (p.rows() != y.size()) {
    std::ostringstream os;
    os << "design matrix has " << p.rows() << " rows but target has " << y.size()
       << " entries";
    throw Error(ErrorCategory::dimension_mismatch, os.str());
  }
  if (p.rows() == 0 || p.cols() == 0) {
    throw Error(ErrorCategory::invalid_argument, "empty design matrix");
  }
}

using Extended = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Extended extend(const Vector& v) { return v.cast<long double>(); }

Extended times(const Matrix& a, const Extended& v) {
  Extended out = Extended::Zero(a.rows());
  for (Eigen::Index j = 0; j < a.cols(); ++j) out += a.col(j).cast<long double>() * v[j];
  return out;
}

constexpr int kRefinementSteps = 2;

// Solves (system) x = rhs with full pivoting and reports the condition.
// `residual(x)` returns rhs - system * x in extended precision, evaluated
// from the factors rather than the rounded product; it drives a few steps
// of iterative refinement on an extended-precision iterate.
template <class Residual>
Extended pivoted_solve(const Matrix& system, const Vector& rhs, double lambda,
                       double& condition, bool& ill_conditioned, Residual residual) {
  Eigen::FullPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  ill_conditioned = !(condition <= kWarnCondition);
  if (lambda == 0.0 && (!lu.isInvertible() || !(condition <= kMaxCondition))) {
    std::ostringstream os;
    os << "stretched gram is singular or ill-conditioned (condition estimate "
       << condition << "); use lambda > 0";
    throw Error(ErrorCategory::singular_system, os.str());
  }
  Extended x = extend(lu.solve(rhs));
  for (int step = 0; step < kRefinementSteps && x.allFinite(); ++step) {
    const Vector r = residual(x).template cast<double>();
    x += extend(lu.solve(r));
  }
  if (!x.allFinite()) {
    throw Error(ErrorCategory::singular_system,
                "linear solve produced non-finite values; use lambda > 0");
  }
  return x;
}

}  // namespace

std::string_view to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::automatic: return "auto";
    case SolveMode::primal: return "primal";
    case SolveMode::dual: return "dual";
  }
  return "auto";
}

SolveMode parse_solve_mode(std::string_view text) {
  if (text == "auto") return SolveMode::automatic;
  if (text == "primal") return SolveMode::primal;
  if (text == "dual") return SolveMode::dual;
  throw Error(ErrorCategory::invalid_argument, "unknown solver mode '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
  if (!std::isfinite(q)) {
    throw Error(ErrorCategory::invalid_argument, "q must be finite");
  }
  if (!(std::fabs(q - 1.0) >= kMinStretchGap)) {
    std::ostringstream os;
    os << "q = " << q << " is too close to 1; the stretch exponent 1/(q-1) is singular";
    throw Error(ErrorCategory::invalid_argument, os.str());
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw Error(ErrorCategory::invalid_argument, "lambda must be finite and >= 0");
  }
}

double stretch_exponent(double q) {
  if (q == 1.0) {
    throw Error(ErrorCategory::domain_error, "stretch exponent 1/(q-1) is undefined at q = 1");
  }
  return 1.0 / (q - 1.0);
}

Matrix elementwise_power(const Matrix& a, double e) {
  if (e == 1.0) return a;
  const bool integral = is_integer(e);
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double v = a(i, j);
      if ((!integral && v < 0.0) || (e < 0.0 && v == 0.0)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << v
           << " cannot be raised to the power " << e;
        throw Error(ErrorCategory::domain_error, os.str());
      }
      const double r = std::pow(v, e);
      if (!std::isfinite(r)) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") overflows when raised to the power " << e;
        throw Error(ErrorCategory::numeric_overflow, os.str());
      }
      out(i, j) = r;
    }
  }
  return out;
}

Solution solve_dual(const Matrix& p, const Vector& y, const SolverConfig& cfg) {
  check_inputs(p, y, cfg);
  const Matrix q = elementwise_power(p.transpose(), stretch_exponent(cfg.q));
  Matrix gram = p * q;
  gram.diagonal().array() += cfg.lambda;

  Solution s;
  s.mode = SolveMode::dual;
  const auto residual = [&](const Extended& w) -> Extended {
    return extend(y) - times(p, times(q, w)) - static_cast<long double>(cfg.lambda) * w;
  };
  const Extended w = pivoted_solve(gram, y, cfg.lambda, s.condition, s.ill_conditioned, residual);
  s.alpha = times(q, w).cast<double>();
  if (!s.alpha.allFinite()) {
    throw Error(ErrorCategory::numeric_overflow, "dual coefficients are not finite");
  }
  return s;
}

Solution solve_primal(const Matrix& p, const Vector& y, const SolverConfig& cfg) {
  check_inputs(p, y, cfg);
  const Matrix q = elementwise_power(p.transpose(), stretch_exponent(cfg.q));
  Matrix gram = q * p;
  gram.diagonal().array() += cfg.lambda;

  Solution s;
  s.mode = SolveMode::primal;
  const Extended qy = times(q, extend(y));
  const auto residual = [&](const Extended& a) -> Extended {
    return qy - times(q, times(p, a)) - static_cast<long double>(cfg.lambda) * a;
  };
  s.alpha = pivoted_solve(gram, qy.cast<double>(), cfg.lambda, s.condition, s.ill_conditioned,
                          residual)
                .cast<double>();
  return s;
}

Solution solve(const Matrix& p, const Vector& y, const SolverConfig& cfg) {
  switch (cfg.mode) {
    case SolveMode::primal: return solve_primal(p, y, cfg);
    case SolveMode::dual: return solve_dual(p, y, cfg);
    case SolveMode::automatic: break;
  }
  return p.rows() < p.cols() ? solve_dual(p, y, cfg) : solve_primal(p, y, cfg);
}

}  // namespace stretchy
