#pragma once

// Wasserstein-1 distance between discrete distributions on the real line,
// and rounding of a distribution to d equal masses at its quantiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specest {

/// Finitely supported probability distribution. Atoms are kept sorted by
/// location with coincident locations merged; zero masses are dropped.
class PointMassDistribution {
 public:
  PointMassDistribution(std::vector<double> locations, std::vector<double> masses) {
    if (locations.size() != masses.size())
      throw std::invalid_argument("PointMassDistribution: size mismatch");
    std::vector<std::size_t> order(locations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return locations[a] < locations[b]; });
    double total = 0.0;
    for (std::size_t idx : order) {
      const double x = locations[idx];
      const double m = masses[idx];
      if (!std::isfinite(x) || !std::isfinite(m))
        throw std::invalid_argument("PointMassDistribution: non-finite atom");
      if (m < 0.0) throw std::invalid_argument("PointMassDistribution: negative mass");
      total += m;
      if (m == 0.0) continue;
      if (!locations_.empty() && locations_.back() == x) {
        masses_.back() += m;
      } else {
        locations_.push_back(x);
        masses_.push_back(m);
      }
    }
    if (locations_.empty() || std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("PointMassDistribution: masses must sum to 1 (got " +
                                  std::to_string(total) + ")");
  }

  /// Mass 1/d on each entry of `values`.
  static PointMassDistribution uniform(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("PointMassDistribution: no atoms");
    std::vector<double> masses(values.size(), 1.0 / static_cast<double>(values.size()));
    return {std::vector<double>(values.begin(), values.end()), std::move(masses)};
  }

  static PointMassDistribution point(double x) { return {{x}, {1.0}}; }

  const std::vector<double>& locations() const noexcept { return locations_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return locations_.size(); }

  /// min{x : F(x) >= level}. Comparisons allow 1e-12 of accumulated
  /// rounding so that exact ties (e.g. F = 1/2 at level 1/2) resolve as in
  /// exact arithmetic.
  double quantile(double level) const {
    double cdf = 0.0;
    for (std::size_t j = 0; j < masses_.size(); ++j) {
      cdf += masses_[j];
      if (cdf >= level - 1e-12) return locations_[j];
    }
    return locations_.back();
  }

 private:
  std::vector<double> locations_;
  std::vector<double> masses_;
};

/// W1(p, q) = integral |F_p(x) - F_q(x)| dx, by a merge sweep over both supports.
inline double w1(const PointMassDistribution& p, const PointMassDistribution& q) {
  const auto& xp = p.locations();
  const auto& xq = q.locations();
  const auto& mp = p.masses();
  const auto& mq = q.masses();
  std::size_t i = 0, j = 0;
  double fp = 0.0, fq = 0.0, total = 0.0;
  double prev = std::min(xp.front(), xq.front());
  while (i < xp.size() || j < xq.size()) {
    const double x = j >= xq.size() || (i < xp.size() && xp[i] <= xq[j]) ? xp[i] : xq[j];
    total += std::abs(fp - fq) * (x - prev);
    while (i < xp.size() && xp[i] == x) fp += mp[i++];
    while (j < xq.size() && xq[j] == x) fq += mq[j++];
    prev = x;
  }
  return total;
}

namespace detail {

inline void require_ascending(std::span<const double> v, const char* name) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw std::invalid_argument(std::string(name) + " is not sorted");
}

}  // namespace detail

/// sum_i |a_i - b_i| for ascending vectors of equal length. Equals
/// d * W1 of the corresponding uniform point-mass distributions.
inline double l1_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_sorted: length mismatch");
  detail::require_ascending(a, "l1_sorted: a");
  detail::require_ascending(b, "l1_sorted: b");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

/// Mass 1/d at each of the d (d+1)-quantiles of p.
inline PointMassDistribution quantize(const PointMassDistribution& p, std::size_t d) {
  if (d == 0) throw std::invalid_argument("quantize: d must be positive");
  std::vector<double> x(d);
  const double denom = static_cast<double>(d + 1);
  for (std::size_t i = 1; i <= d; ++i) x[i - 1] = p.quantile(static_cast<double>(i) / denom);
  return PointMassDistribution::uniform(x);
}

}  // namespace specest
