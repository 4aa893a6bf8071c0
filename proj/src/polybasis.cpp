#include "stretchy/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stretchy/error.hpp"

namespace stretchy {

namespace {

[[noreturn]] void throw_count_overflow(std::size_t d, std::size_t r) {
  std::ostringstream os;
  os << "term count C(" << d << " + " << r << ", " << r
     << ") overflows a 64-bit count";
  throw Error(ErrorCategory::arithmetic_overflow, os.str());
}

// Appends all length-`len` exponent tuples summing to `remaining` in
// ascending lexicographic order.
void compositions(std::size_t len, std::uint32_t remaining,
                  std::vector<std::uint32_t>& prefix,
                  std::vector<std::uint32_t>& out) {
  if (len == 1) {
    prefix.push_back(remaining);
    out.insert(out.end(), prefix.begin(), prefix.end());
    prefix.pop_back();
    return;
  }
  for (std::uint32_t first = 0; first <= remaining; ++first) {
    prefix.push_back(first);
    compositions(len - 1, remaining - first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::uint64_t count_terms(std::size_t d, std::size_t r) {
  if (d < 1) {
    throw Error(ErrorCategory::invalid_argument, "input dimension d must be >= 1");
  }
  std::uint64_t n = 0;
  if (__builtin_add_overflow(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r), &n)) {
    throw_count_overflow(d, r);
  }
  // C(n, k) with k = min(d, r), built up as C(n - k + i, i); every step is
  // exact. Dividing by gcds first keeps the intermediate product small.
  const std::uint64_t k = std::min<std::uint64_t>(d, r);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g1 = std::gcd(c, den);
    c /= g1;
    den /= g1;
    num /= den;  // den now divides num
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(c, num, &next)) throw_count_overflow(d, r);
    c = next;
  }
  return c;
}

MonomialBasis::MonomialBasis(std::size_t d, std::size_t r) : d_(d), r_(r) {
  const std::uint64_t n = count_terms(d, r);
  if (n > std::numeric_limits<std::size_t>::max() / d ||
      r > std::numeric_limits<std::uint32_t>::max()) {
    throw_count_overflow(d, r);
  }
  if (n > kMaxBasisTerms) {
    std::ostringstream os;
    os << "basis with d = " << d << ", r = " << r << " has " << n
       << " terms, above the supported maximum of " << kMaxBasisTerms;
    throw Error(ErrorCategory::invalid_argument, os.str());
  }
  terms_ = static_cast<std::size_t>(n);
  exps_.reserve(terms_ * d_);
  std::vector<std::uint32_t> prefix;
  prefix.reserve(d_);
  for (std::size_t k = 0; k <= r_; ++k) {
    compositions(d_, static_cast<std::uint32_t>(k), prefix, exps_);
  }
}

std::uint32_t MonomialBasis::degree(std::size_t term) const {
  const auto e = exponents(term);
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

MonomialBasis enumerate_basis(std::size_t d, std::size_t r) {
  return MonomialBasis(d, r);
}

DesignMatrix expand(const Matrix& x, const MonomialBasis& basis) {
  const std::size_t d = basis.dim();
  const std::size_t r = basis.order();
  if (static_cast<std::size_t>(x.cols()) != d) {
    std::ostringstream os;
    os << "input has " << x.cols() << " columns but basis expects " << d;
    throw Error(ErrorCategory::dimension_mismatch, os.str());
  }

  const Eigen::Index m = x.rows();
  const auto terms = static_cast<Eigen::Index>(basis.size());
  DesignMatrix out{Matrix(m, terms), BasisId{d, r}};

  // powers(k, n) = x_k^n for the current row.
  Matrix powers(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(r + 1));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      powers(kk, 0) = 1.0;
      for (std::size_t n = 1; n <= r; ++n) {
        const auto nn = static_cast<Eigen::Index>(n);
        powers(kk, nn) = powers(kk, nn - 1) * x(i, kk);
      }
    }
    for (Eigen::Index t = 0; t < terms; ++t) {
      const auto e = basis.exponents(static_cast<std::size_t>(t));
      double v = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        v *= powers(static_cast<Eigen::Index>(k), e[k]);
      }
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite design matrix entry at row " << i << ", term " << t;
        throw Error(ErrorCategory::numeric_overflow, os.str());
      }
      out.values(i, t) = v;
    }
  }
  return out;
}

}  // namespace stretchy
