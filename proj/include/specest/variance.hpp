#pragma once

// Monte-Carlo measurement of the sampling variance of the increasing-cycle
// moment estimator, and the shape of its theoretical variance bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "specest/moments.hpp"
#include "specest/parallel.hpp"
#include "specest/synth.hpp"

namespace specest {

struct MonteCarloStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::size_t trials = 0;

  double standard_error() const { return std::sqrt(variance / static_cast<double>(trials)); }
};

inline MonteCarloStats summarize(const std::vector<double>& values) {
  MonteCarloStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  return s;
}

/// Mean and variance of estimate_moment(Y, k) over independent draws
/// Y = X S. Trial i uses seed ^ i, so results do not depend on `threads`.
inline MonteCarloStats monte_carlo_variance(const CovarianceModel& model, std::size_t n,
                                            std::size_t k, std::size_t trials, std::uint64_t seed,
                                            EntryDistribution entry = {},
                                            std::size_t threads = 1) {
  if (trials < 100) throw std::invalid_argument("monte_carlo_variance: needs at least 100 trials");
  if (k == 0 || k > n) throw std::invalid_argument("monte_carlo_variance: need 1 <= k <= n");
  const SquareMatrix s = factor(model);
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    values[i] = estimate_moment(sample(s, n, entry, trial_seed(seed, i)), k);
  });
  return summarize(values);
}

/// max(d^{k-2} / n^k, d^{1/2 - 1/k} / n, 1 / n): the variance bound of the
/// estimator of tr(T^k) with the k-dependent constant and tr(T^k)^2 removed.
inline double variance_bound_shape(std::size_t d, std::size_t n, std::size_t k) {
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::max({std::pow(dd, kk - 2.0) / std::pow(nn, kk), std::pow(dd, 0.5 - 1.0 / kk) / nn,
                   1.0 / nn});
}

/// (1/d) tr(Sigma^k) for the model, from its population spectrum.
inline double true_moment(const CovarianceModel& model, std::size_t k) {
  const auto ev = true_spectrum(model);
  double total = 0.0;
  for (double v : ev) total += std::pow(v, static_cast<double>(k));
  return total / static_cast<double>(ev.size());
}

}  // namespace specest
