#pragma once

// Synthetic ground truth: covariance families, factors S with S^T S = Sigma,
// and sampling Y = X S with i.i.d. mean-0 variance-1 entries.
//
// Random numbers come from std::mt19937_64 seeded directly with the caller's
// 64-bit seed. Independent trial i of an experiment seeded with s uses seed
// s ^ i (see trial_seed).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specest/linalg.hpp"

namespace specest {

enum class Family { identity, two_spike, uniform_spectrum, toeplitz };

struct CovarianceModel {
  Family family = Family::identity;
  std::size_t d = 1;
  double rho = 0.3;          // toeplitz: Sigma_ij = rho^|i-j|
  double uniform_max = 2.0;  // uniform_spectrum: eigenvalues {u/d, 2u/d, ..., u}
  double spike_low = 1.0;    // two_spike: d/2 eigenvalues each
  double spike_high = 2.0;

  void validate() const {
    if (d < 1) throw std::invalid_argument("CovarianceModel: d must be >= 1");
    if (family == Family::toeplitz && !(std::abs(rho) < 1.0))
      throw std::invalid_argument("CovarianceModel: |rho| must be < 1");
    if (family == Family::two_spike && d % 2 != 0)
      throw std::invalid_argument("CovarianceModel: two_spike needs an even dimension");
    if (family == Family::uniform_spectrum && !(uniform_max > 0.0))
      throw std::invalid_argument("CovarianceModel: uniform_max must be > 0");
  }
};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::identity: return "identity";
    case Family::two_spike: return "two_spike";
    case Family::uniform_spectrum: return "uniform_spectrum";
    case Family::toeplitz: return "toeplitz";
  }
  return "unknown";
}

inline Family parse_family(std::string_view s) {
  if (s == "identity") return Family::identity;
  if (s == "two_spike" || s == "two-spike") return Family::two_spike;
  if (s == "uniform_spectrum" || s == "uniform") return Family::uniform_spectrum;
  if (s == "toeplitz") return Family::toeplitz;
  throw std::invalid_argument("unknown covariance family '" + std::string(s) + "'");
}

enum class EntryKind { gaussian, rademacher, uniform_scaled };

struct EntryDistribution {
  EntryKind kind = EntryKind::gaussian;

  /// E[X^4]; all kinds have mean 0 and variance 1.
  double fourth_moment() const noexcept {
    switch (kind) {
      case EntryKind::gaussian: return 3.0;
      case EntryKind::rademacher: return 1.0;
      case EntryKind::uniform_scaled: return 9.0 / 5.0;
    }
    return 0.0;
  }
};

inline std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::gaussian: return "gaussian";
    case EntryKind::rademacher: return "rademacher";
    case EntryKind::uniform_scaled: return "uniform";
  }
  return "unknown";
}

inline EntryKind parse_entry_kind(std::string_view s) {
  if (s == "gaussian") return EntryKind::gaussian;
  if (s == "rademacher") return EntryKind::rademacher;
  if (s == "uniform" || s == "uniform_scaled") return EntryKind::uniform_scaled;
  throw std::invalid_argument("unknown entry distribution '" + std::string(s) + "'");
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

inline SquareMatrix toeplitz_covariance(std::size_t d, double rho) {
  const auto m = static_cast<Eigen::Index>(d);
  Matrix sigma(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      sigma(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return SquareMatrix(std::move(sigma));
}

/// Population eigenvalues, ascending.
inline std::vector<double> true_spectrum(const CovarianceModel& model) {
  model.validate();
  const std::size_t d = model.d;
  std::vector<double> ev(d);
  switch (model.family) {
    case Family::identity:
      ev.assign(d, 1.0);
      break;
    case Family::two_spike:
      for (std::size_t i = 0; i < d; ++i) ev[i] = i < d / 2 ? model.spike_low : model.spike_high;
      break;
    case Family::uniform_spectrum:
      for (std::size_t i = 1; i <= d; ++i)
        ev[i - 1] = model.uniform_max * static_cast<double>(i) / static_cast<double>(d);
      break;
    case Family::toeplitz:
      ev = sym_eigenvalues(toeplitz_covariance(d, model.rho));
      break;
  }
  return ev;
}

/// S with S^T S = Sigma: diag(sqrt(lambda)) for spectrum-defined families,
/// the symmetric square root for Toeplitz.
inline SquareMatrix factor(const CovarianceModel& model) {
  model.validate();
  const auto m = static_cast<Eigen::Index>(model.d);
  if (model.family != Family::toeplitz) {
    const auto ev = true_spectrum(model);
    Vector root(m);
    for (Eigen::Index i = 0; i < m; ++i) root(i) = std::sqrt(ev[static_cast<std::size_t>(i)]);
    return SquareMatrix(Matrix(root.asDiagonal()));
  }
  const SquareMatrix sigma = toeplitz_covariance(model.d, model.rho);
  const SymEigen eig = sym_eigen(sigma);
  Vector root(m);
  const double tol = 1e-12 * std::max(1.0, std::abs(eig.values.back()));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = eig.values[static_cast<std::size_t>(i)];
    if (v < -tol) throw std::logic_error("factor: covariance is not positive semidefinite");
    root(i) = std::sqrt(std::max(v, 0.0));
  }
  Matrix s = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  s = 0.5 * (s + s.transpose()).eval();
  return SquareMatrix(std::move(s));
}

/// n x d matrix of i.i.d. entries, deterministic in `seed`.
inline Matrix sample_entries(std::size_t n, std::size_t d, EntryDistribution entry,
                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  // Row-major fill so that a sample's entries are consecutive draws.
  auto fill = [&](auto&& draw) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = draw();
  };
  switch (entry.kind) {
    case EntryKind::gaussian: {
      std::normal_distribution<double> dist(0.0, 1.0);
      fill([&] { return dist(gen); });
      break;
    }
    case EntryKind::rademacher: {
      fill([&] { return (gen() >> 63) ? 1.0 : -1.0; });
      break;
    }
    case EntryKind::uniform_scaled: {
      const double r = std::sqrt(3.0);
      std::uniform_real_distribution<double> dist(-r, r);
      fill([&] { return dist(gen); });
      break;
    }
  }
  return x;
}

/// Y = X S.
inline DataMatrix sample(const SquareMatrix& s, std::size_t n, EntryDistribution entry,
                         std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  const Matrix x = sample_entries(n, s.order(), entry, seed);
  const Matrix& sv = s.values();
  if (sv.isDiagonal(0.0)) return DataMatrix(x * sv.diagonal().asDiagonal());
  return DataMatrix(x * sv);
}

}  // namespace specest
