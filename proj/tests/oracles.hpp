#pragma once

// Reference implementations used only by tests. They deliberately take a
// different route from the library: brute-force enumeration, std::pow
// products, binomial sums and SVD pseudo-inverses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// D = sum_{k=0}^{r} (k + d - 1)! / (k! (d - 1)!) via Pascal's triangle in
// long double-free integer arithmetic (small arguments only).
inline std::uint64_t term_count_sum(std::size_t d, std::size_t r) {
  std::vector<std::vector<std::uint64_t>> c(d + r + 1);
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n].assign(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  std::uint64_t total = 0;
  for (std::size_t k = 0; k <= r; ++k) total += c[k + d - 1][k];
  return total;
}

// Every exponent tuple in [0, r]^d with sum <= r, sorted by (degree, tuple).
inline std::vector<std::vector<std::uint32_t>> brute_force_basis(std::size_t d, std::size_t r) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> e(d, 0);
  while (true) {
    std::uint32_t s = 0;
    for (auto v : e) s += v;
    if (s <= r) out.push_back(e);
    std::size_t k = 0;
    while (k < d && e[k] == r) e[k++] = 0;
    if (k == d) break;
    ++e[k];
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    std::uint32_t sa = 0, sb = 0;
    for (auto v : a) sa += v;
    for (auto v : b) sb += v;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

inline double monomial(const Eigen::RowVectorXd& x, const std::vector<std::uint32_t>& e) {
  double v = 1.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    v *= std::pow(x[static_cast<Eigen::Index>(k)], static_cast<double>(e[k]));
  }
  return v;
}

// Moore-Penrose pseudo-inverse through a full SVD.
inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = std::numeric_limits<double>::epsilon() *
                     static_cast<double>(std::max(a.rows(), a.cols())) * (s.size() ? s[0] : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Ridge solution from the SVD P = U S V^T: alpha = V diag(s / (s^2 + lambda)) U^T y.
// With lambda = 0 this is the minimum-norm least-squares solution.
inline Eigen::VectorXd svd_ridge(const Eigen::MatrixXd& p, const Eigen::VectorXd& y, double lambda) {
  if (lambda == 0.0) return pinv(p) * y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::ArrayXd s = svd.singularValues().array();
  const Eigen::VectorXd f = (s / (s.square() + lambda)).matrix();
  return svd.matrixV() * (f.asDiagonal() * (svd.matrixU().transpose() * y));
}

inline Eigen::MatrixXd random_positive(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                       double lo = 0.5, double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace oracle
