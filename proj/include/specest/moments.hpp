#pragma once

// Unbiased estimation of population spectral moments from the average of
// (Y Y^T)_sigma over all increasing k-cycles sigma, plus the (biased)
// empirical-spectrum moments used as a baseline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specest/errors.hpp"
#include "specest/linalg.hpp"

namespace specest {

/// Binomial coefficient C(n, k) as a double.
///
/// Evaluated as a running product over min(k, n - k) factors, which is
/// accurate to a few ulps for every size this library handles.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  return result;
}

/// Estimated moments of the b-scaled spectral distribution.
struct MomentEstimate {
  std::vector<double> values;  // values[i-1] estimates (1/d) sum_j (lambda_j / b)^i
  std::size_t n = 0;
  std::size_t d = 0;
  double scale = 1.0;  // b

  std::size_t k_max() const noexcept { return values.size(); }
};

/// tr(G^{m-1} A) for m = 1..k_max, where G is the strict upper triangle of A.
///
/// F holds G^{m-1}; each step right-multiplies by G. Since F and G are both
/// strictly upper triangular after the first step, only the triangular part
/// of the product is needed.
inline std::vector<double> increasing_cycle_sums(const SquareMatrix& a, std::size_t k_max) {
  const Matrix& av = a.values();
  const Eigen::Index n = av.rows();
  std::vector<double> sums;
  sums.reserve(k_max);
  if (k_max == 0) return sums;

  sums.push_back(av.trace());
  if (k_max == 1) return sums;

  const Matrix g = av.triangularView<Eigen::StrictlyUpper>();
  Matrix f = g;
  Matrix next(n, n);
  for (std::size_t m = 2; m <= k_max; ++m) {
    // A is symmetric, so tr(F A) = sum_ij F_ij A_ij.
    sums.push_back(f.cwiseProduct(av).sum());
    if (m == k_max) break;
    next.noalias() = f.triangularView<Eigen::StrictlyUpper>() * g;
    f.swap(next);
  }
  for (double s : sums)
    if (!std::isfinite(s)) throw non_finite_error("increasing_cycle_sums: overflow");
  return sums;
}

namespace detail {

inline void check_order(std::size_t k, std::size_t n) {
  if (k == 0) throw std::invalid_argument("moment order k must be >= 1");
  if (k > n)
    throw std::invalid_argument("moment order k = " + std::to_string(k) +
                                " exceeds sample count n = " + std::to_string(n) +
                                "; no increasing k-cycle exists");
}

}  // namespace detail

/// Unbiased estimate of (1/d) sum_i lambda_i^k: tr(G^{k-1} A) / (d C(n,k)).
inline double estimate_moment(const DataMatrix& y, std::size_t k) {
  const std::size_t n = y.samples();
  detail::check_order(k, n);
  const auto sums = increasing_cycle_sums(gram(y), k);
  return sums.back() / (static_cast<double>(y.dimension()) * binomial(n, k));
}

/// Estimates of the first k_max moments of the spectrum scaled by 1/b.
///
/// The samples are divided by sqrt(b) first, so a valid upper bound b on
/// the population eigenvalues maps the spectrum into [0, 1].
inline MomentEstimate estimate_moments(const DataMatrix& y, std::size_t k_max, double b) {
  const std::size_t n = y.samples();
  detail::check_order(k_max, n);
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("scale b must be positive");

  const DataMatrix scaled = b == 1.0 ? y : y.scaled(1.0 / std::sqrt(b));
  const auto sums = increasing_cycle_sums(gram(scaled), k_max);

  MomentEstimate est;
  est.n = n;
  est.d = y.dimension();
  est.scale = b;
  est.values.resize(k_max);
  for (std::size_t k = 1; k <= k_max; ++k)
    est.values[k - 1] = sums[k - 1] / (static_cast<double>(est.d) * binomial(n, k));
  return est;
}

/// (1/d) tr((Y^T Y / n)^k), the k-th moment of the empirical spectrum.
inline double empirical_moment(const DataMatrix& y, std::size_t k) {
  if (k == 0) throw std::invalid_argument("moment order k must be >= 1");
  const Matrix& yv = y.values();
  const double n = static_cast<double>(y.samples());
  // The nonzero spectra of Y^T Y and Y Y^T coincide; use the smaller one.
  Matrix c = yv.rows() <= yv.cols() ? Matrix(yv * yv.transpose() / n)
                                    : Matrix(yv.transpose() * yv / n);
  Matrix power = c;
  for (std::size_t i = 2; i < k; ++i) power = (power * c).eval();
  const double tr = k == 1 ? c.trace() : power.cwiseProduct(c).sum();
  return tr / static_cast<double>(y.dimension());
}

/// Eigenvalues of Y^T Y / n, ascending, length d. Tiny negative rounding
/// residue is clamped to zero.
inline std::vector<double> empirical_spectrum(const DataMatrix& y) {
  const Matrix& yv = y.values();
  const std::size_t n = y.samples();
  const std::size_t d = y.dimension();
  std::vector<double> ev;
  if (n < d) {
    Matrix a = gram(y).values() / static_cast<double>(n);
    ev = sym_eigenvalues(SquareMatrix(std::move(a)));
    ev.insert(ev.begin(), d - n, 0.0);
  } else {
    Matrix c = yv.transpose() * yv / static_cast<double>(n);
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    ev = sym_eigenvalues(SquareMatrix(std::move(c)));
  }
  for (double& v : ev) v = std::max(v, 0.0);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Exhaustive sum over sigma_1 < ... < sigma_k of A_{s1 s2} ... A_{sk s1}.
///
/// Throws resource_limit_error when C(n, k) exceeds `max_tuples`.
inline double brute_force_increasing(const SquareMatrix& a, std::size_t k,
                                     double max_tuples = 1e6) {
  const std::size_t n = a.order();
  if (k == 0) throw std::invalid_argument("cycle length k must be >= 1");
  if (k > n) return 0.0;
  if (binomial(n, k) > max_tuples)
    throw resource_limit_error("brute_force_increasing: C(" + std::to_string(n) + ", " +
                               std::to_string(k) + ") tuples exceeds the enumeration limit");

  std::vector<std::size_t> idx(k);
  double total = 0.0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      double prod = 1.0;
      for (std::size_t i = 0; i < k; ++i) prod *= a(idx[i], idx[(i + 1) % k]);
      total += prod;
      return;
    }
    for (std::size_t v = start; v + (k - pos) <= n; ++v) {
      idx[pos] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
  return total;
}

}  // namespace specest
