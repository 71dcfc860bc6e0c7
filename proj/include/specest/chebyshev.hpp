#pragma once

// Pairs of distributions with matching low-order moments but separated in
// Wasserstein distance, built from the signed measure 1/T_k'(x_i) on the
// roots x_i of the Chebyshev polynomial T_k.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specest/wasserstein.hpp"

namespace specest {

/// Signed weights y_i on the Chebyshev roots x_1 < ... < x_k.
struct SignedMeasure {
  std::vector<double> locations;
  std::vector<double> weights;
};

namespace detail {

inline void require_even_degree(std::size_t k) {
  if (k < 4 || k % 2 != 0)
    throw std::invalid_argument("Chebyshev construction needs an even k >= 4, got " +
                                std::to_string(k));
}

}  // namespace detail

/// x_i = -cos((2i - 1) pi / 2k), y_i = 1 / T_k'(x_i) = 1 / (k U_{k-1}(x_i)),
/// with U_{k-1}(cos t) = sin(k t) / sin(t).
inline SignedMeasure chebyshev_signed_measure(std::size_t k) {
  detail::require_even_degree(k);
  const double kd = static_cast<double>(k);
  SignedMeasure m;
  m.locations.resize(k);
  m.weights.resize(k);
  for (std::size_t i = 1; i <= k; ++i) {
    // x_i = -cos(theta) = cos(pi - theta)
    const double t = std::numbers::pi - (2.0 * static_cast<double>(i) - 1.0) * std::numbers::pi / (2.0 * kd);
    m.locations[i - 1] = std::cos(t);
    const double u = std::sin(kd * t) / std::sin(t);
    m.weights[i - 1] = 1.0 / (kd * u);
  }
  return m;
}

struct MomentMatchedPair {
  PointMassDistribution p;  // normalized positive part
  PointMassDistribution q;  // normalized negative part
  SignedMeasure measure;
};

/// Splits the Chebyshev signed measure into its normalized positive and
/// negative parts. The two share their first k - 2 moments.
inline MomentMatchedPair chebyshev_construction(std::size_t k) {
  SignedMeasure m = chebyshev_signed_measure(k);
  std::vector<double> xp, mp, xq, mq;
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (m.weights[i] > 0.0) {
      pos += m.weights[i];
    } else {
      neg -= m.weights[i];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (m.weights[i] > 0.0) {
      xp.push_back(m.locations[i]);
      mp.push_back(m.weights[i] / pos);
    } else {
      xq.push_back(m.locations[i]);
      mq.push_back(-m.weights[i] / neg);
    }
  }
  return {PointMassDistribution(std::move(xp), std::move(mp)),
          PointMassDistribution(std::move(xq), std::move(mq)), std::move(m)};
}

/// (E[X], E[X^2], ..., E[X^k]) for X ~ dist.
inline std::vector<double> moments_of(const PointMassDistribution& dist, std::size_t k) {
  std::vector<double> out(k, 0.0);
  for (std::size_t j = 0; j < dist.size(); ++j) {
    double power = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      power *= dist.locations()[j];
      out[i] += dist.masses()[j] * power;
    }
  }
  return out;
}

struct BoundCheck {
  std::string name;
  bool passed = false;
  // Observed range of the quantity normalized so the bound reads lower <= v <= upper.
  double observed_min = 0.0;
  double observed_max = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RootWeightReport {
  std::size_t k = 0;
  std::vector<BoundCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Evaluates, for i <= k/2,
///   1 <= |y_i| k^2 / i <= pi,
///   5 <= |x_{i+1} - x_i| k^2 / i <= 10,
/// and that |sum of y_{2i-1}| = |sum of y_{2i}| lies in [1/4, 1/2].
/// Reports the observed range of each normalized quantity.
inline RootWeightReport root_weight_bounds_check(std::size_t k) {
  const SignedMeasure m = chebyshev_signed_measure(k);
  const double k2 = static_cast<double>(k * k);
  RootWeightReport report;
  report.k = k;

  auto range_check = [&](std::string name, double lo, double hi, auto&& value) {
    BoundCheck c{std::move(name), true, std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity(), lo, hi};
    for (std::size_t i = 1; i <= k / 2; ++i) {
      const double v = value(i);
      c.observed_min = std::min(c.observed_min, v);
      c.observed_max = std::max(c.observed_max, v);
    }
    c.passed = c.observed_min >= lo && c.observed_max <= hi;
    report.checks.push_back(std::move(c));
  };

  range_check("weight_magnitude", 1.0, std::numbers::pi, [&](std::size_t i) {
    return std::abs(m.weights[i - 1]) * k2 / static_cast<double>(i);
  });
  range_check("root_spacing", 5.0, 10.0, [&](std::size_t i) {
    return (m.locations[i] - m.locations[i - 1]) * k2 / static_cast<double>(i);
  });

  double odd = 0.0, even = 0.0;
  for (std::size_t i = 0; i < k; ++i) (i % 2 == 0 ? odd : even) += m.weights[i];
  BoundCheck sum{"alternating_sum", false, std::min(std::abs(odd), std::abs(even)),
                 std::max(std::abs(odd), std::abs(even)), 0.25, 0.5};
  sum.passed = std::abs(odd + even) <= 1e-10 && sum.observed_min >= 0.25 && sum.observed_max <= 0.5;
  report.checks.push_back(std::move(sum));
  return report;
}

}  // namespace specest
