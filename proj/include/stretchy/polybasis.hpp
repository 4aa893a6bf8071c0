#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stretchy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest basis that will be materialized (dense storage only).
inline constexpr std::uint64_t kMaxBasisTerms = 50'000'000;

/// Number of monomials of total degree <= r in d variables, i.e. C(d + r, r).
/// Throws Error(arithmetic_overflow) when the count does not fit in 64 bits.
std::uint64_t count_terms(std::size_t d, std::size_t r);

/// Exponent vectors of a full multivariate polynomial, in graded
/// lexicographic order: ascending total degree, then ascending exponent
/// tuples (n_1, ..., n_d) within a degree. Entry 0 is the intercept.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t d, std::size_t r);

  std::size_t dim() const noexcept { return d_; }
  std::size_t order() const noexcept { return r_; }
  std::size_t size() const noexcept { return terms_; }

  std::span<const std::uint32_t> exponents(std::size_t term) const {
    return {exps_.data() + term * d_, d_};
  }
  std::uint32_t degree(std::size_t term) const;

  friend bool operator==(const MonomialBasis& a, const MonomialBasis& b) {
    return a.d_ == b.d_ && a.r_ == b.r_;
  }

 private:
  std::size_t d_;
  std::size_t r_;
  std::size_t terms_;
  std::vector<std::uint32_t> exps_;  // row-major, terms_ x d_
};

MonomialBasis enumerate_basis(std::size_t d, std::size_t r);

/// Identifies the basis a design matrix was produced from. The graded-lex
/// basis is fully determined by (d, r).
struct BasisId {
  std::size_t d = 0;
  std::size_t r = 0;
  friend bool operator==(const BasisId&, const BasisId&) = default;
};

struct DesignMatrix {
  Matrix values;  // M x D, column 0 is the intercept
  BasisId basis;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Evaluates every monomial of `basis` on every row of `x` (0^0 == 1).
/// Throws Error(dimension_mismatch) if x.cols() != basis.dim() and
/// Error(numeric_overflow) naming the row and term on a non-finite entry.
DesignMatrix expand(const Matrix& x, const MonomialBasis& basis);

}  // namespace stretchy
