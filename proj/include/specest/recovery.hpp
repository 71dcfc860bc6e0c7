#pragma once

// Moments-to-spectrum: fit a distribution on a fine mesh of [0, 1] to the
// estimated moments with a weighted-L1 linear program, round it to d
// quantiles and rescale by the eigenvalue bound b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specest/linalg.hpp"
#include "specest/lp.hpp"
#include "specest/moments.hpp"

namespace specest {

enum class WeightScheme { theoretical, uniform };

struct RecoveryConfig {
  std::size_t k_max = 7;
  double b = 1.0;                     // upper bound on the population eigenvalues
  std::optional<double> mesh_step;    // defaults to 1 / max(n, d)
  std::size_t mesh_cap = 4001;
  WeightScheme weights = WeightScheme::theoretical;

  void validate() const {
    if (k_max < 1) throw std::invalid_argument("RecoveryConfig: k_max must be >= 1");
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("RecoveryConfig: b must be > 0");
    if (mesh_step && !(*mesh_step > 0.0))
      throw std::invalid_argument("RecoveryConfig: mesh step must be > 0");
    if (mesh_cap < 2) throw std::invalid_argument("RecoveryConfig: mesh_cap must be >= 2");
  }
};

/// Point masses on a support in [0, 1] (the b-scaled domain).
struct SpectralDistribution {
  std::vector<double> support;
  std::vector<double> masses;
};

/// d estimated eigenvalues, ascending and nonnegative.
class SpectrumVector {
 public:
  SpectrumVector() = default;
  explicit SpectrumVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
        throw std::invalid_argument("SpectrumVector: values must be finite and nonnegative");
      if (i && values_[i] < values_[i - 1])
        throw std::invalid_argument("SpectrumVector: values must be ascending");
    }
  }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> span() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct Mesh {
  std::vector<double> points;  // 0 = points.front() < ... < points.back() = 1
  double step = 0.0;
  bool coarsened = false;      // requested step exceeded mesh_cap and was widened
};

/// Uniform mesh {0, step, 2 step, ..., 1} on the b-scaled domain.
///
/// The step is cfg.mesh_step, or 1 / max(n, d) when unset. When that would
/// need more than cfg.mesh_cap points the step becomes 1 / (mesh_cap - 1).
inline Mesh build_mesh(double b, const RecoveryConfig& cfg, std::size_t n, std::size_t d) {
  if (!(b > 0.0)) throw std::invalid_argument("build_mesh: b must be positive");
  cfg.validate();
  double step = cfg.mesh_step ? *cfg.mesh_step : 1.0 / static_cast<double>(std::max({n, d, std::size_t{1}}));
  auto intervals = static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9));
  intervals = std::max<std::size_t>(intervals, 1);
  Mesh mesh;
  if (intervals + 1 > cfg.mesh_cap) {
    intervals = cfg.mesh_cap - 1;
    step = 1.0 / static_cast<double>(intervals);
    mesh.coarsened = true;
  }
  mesh.step = step;
  mesh.points.reserve(intervals + 1);
  for (std::size_t i = 0; i < intervals; ++i) mesh.points.push_back(static_cast<double>(i) * step);
  mesh.points.push_back(1.0);
  return mesh;
}

/// c_i = (2i)^{2i} max(d^{i/2-1}, 1) / n^{i/2}, the relative standard error
/// scale of the i-th moment estimate.
inline double log_moment_error_scale(std::size_t i, std::size_t n, std::size_t d) {
  const double di = static_cast<double>(i);
  const double ld = std::log(static_cast<double>(d));
  const double ln = std::log(static_cast<double>(n));
  return 2.0 * di * std::log(2.0 * di) + std::max((di / 2.0 - 1.0) * ld, 0.0) - di / 2.0 * ln;
}

inline double moment_error_scale(std::size_t i, std::size_t n, std::size_t d) {
  return std::exp(log_moment_error_scale(i, n, d));
}

inline constexpr double kWeightMomentFloor = 1e-6;

/// w_i = 1 / (c_i max(alpha_i, 1e-6)), evaluated in log space.
inline std::vector<double> default_weights(std::size_t n, std::size_t d, std::size_t k_max,
                                           std::span<const double> alpha) {
  if (alpha.size() < k_max) throw std::invalid_argument("default_weights: too few moments");
  std::vector<double> w(k_max);
  for (std::size_t i = 1; i <= k_max; ++i) {
    const double a = std::max(alpha[i - 1], kWeightMomentFloor);
    w[i - 1] = std::exp(-log_moment_error_scale(i, n, d) - std::log(a));
  }
  return w;
}

struct Recovery {
  SpectralDistribution distribution;
  double mesh_step = 0.0;
  bool mesh_coarsened = false;
  SolveStatus status = SolveStatus::optimal;
  double objective = 0.0;
};

/// Fits a mesh distribution on [0, 1] to the first k_max estimated moments.
inline Recovery recover_distribution(const MomentEstimate& alpha, const RecoveryConfig& cfg) {
  cfg.validate();
  if (alpha.k_max() < 1) throw std::invalid_argument("recover_distribution: no moments");
  const std::size_t k = std::min(cfg.k_max, alpha.k_max());
  Mesh mesh = build_mesh(cfg.b, cfg, alpha.n, alpha.d);

  std::vector<double> target(alpha.values.begin(), alpha.values.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<double> weights = cfg.weights == WeightScheme::theoretical
                                    ? default_weights(alpha.n, alpha.d, k, target)
                                    : std::vector<double>(k, 1.0);

  const auto problem = WeightedL1Problem::from_mesh(mesh.points, std::move(target), std::move(weights));
  SimplexSolution sol = solve(problem);

  Recovery out;
  out.distribution.support = std::move(mesh.points);
  out.distribution.masses = std::move(sol.p);
  out.mesh_step = mesh.step;
  out.mesh_coarsened = mesh.coarsened;
  out.status = sol.status;
  out.objective = sol.objective;
  return out;
}

/// lambda_i = min{x_j : sum_{l <= j} p_l >= i / (d + 1)}, i = 1..d.
inline std::vector<double> quantile_vector(const SpectralDistribution& dist, std::size_t d) {
  if (dist.support.empty() || dist.support.size() != dist.masses.size())
    throw std::invalid_argument("quantile_vector: malformed distribution");
  std::vector<double> out(d);
  const double denom = static_cast<double>(d + 1);
  std::size_t j = 0;
  double cdf = dist.masses[0];
  for (std::size_t i = 1; i <= d; ++i) {
    const double level = static_cast<double>(i) / denom;
    // Tolerance absorbs rounding in the running sum; see PointMassDistribution::quantile.
    while (cdf < level - 1e-12 && j + 1 < dist.support.size()) cdf += dist.masses[++j];
    out[i - 1] = dist.support[j];
  }
  return out;
}

struct SpectrumEstimate {
  SpectrumVector spectrum;
  MomentEstimate moments;
  Recovery recovery;
};

/// Full pipeline: moments of Y / sqrt(b), LP fit, quantiles, times b.
inline SpectrumEstimate estimate_spectrum_detailed(const DataMatrix& y, const RecoveryConfig& cfg) {
  cfg.validate();
  if (cfg.k_max > y.samples())
    throw std::invalid_argument("estimate_spectrum: k_max = " + std::to_string(cfg.k_max) +
                                " exceeds the number of samples n = " + std::to_string(y.samples()));
  SpectrumEstimate out;
  out.moments = estimate_moments(y, cfg.k_max, cfg.b);
  out.recovery = recover_distribution(out.moments, cfg);
  std::vector<double> q = quantile_vector(out.recovery.distribution, y.dimension());
  for (double& v : q) v = std::clamp(v * cfg.b, 0.0, cfg.b);
  out.spectrum = SpectrumVector(std::move(q));
  return out;
}

inline SpectrumVector estimate_spectrum(const DataMatrix& y, const RecoveryConfig& cfg) {
  return estimate_spectrum_detailed(y, cfg).spectrum;
}

/// Heuristic eigenvalue bound: twice the largest eigenvalue of Y^T Y / n.
/// Not a guaranteed bound; offered as a default when none is known.
inline double heuristic_bound(const DataMatrix& y) {
  const auto ev = empirical_spectrum(y);
  const double top = ev.empty() ? 0.0 : ev.back();
  return top > 0.0 ? 2.0 * top : 1.0;
}

}  // namespace specest
