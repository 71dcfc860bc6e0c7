#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "specest/recovery.hpp"
#include "specest/synth.hpp"
#include "specest/wasserstein.hpp"

namespace specest {
namespace {

MomentEstimate exact_moments(const std::vector<double>& x, const std::vector<double>& m, std::size_t k,
                             std::size_t n, std::size_t d) {
  MomentEstimate a;
  a.values.assign(k, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) a.values[i] += m[j] * std::pow(x[j], static_cast<double>(i + 1));
  a.n = n;
  a.d = d;
  return a;
}

double w1_to(const Recovery& r, const std::vector<double>& x, const std::vector<double>& m) {
  return w1(PointMassDistribution(r.distribution.support, r.distribution.masses), PointMassDistribution(x, m));
}

TEST(BuildMesh, Examples) {
  RecoveryConfig cfg;
  cfg.mesh_step = 0.5;
  const Mesh m = build_mesh(1.0, cfg, 10, 10);
  EXPECT_EQ(m.points, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_FALSE(m.coarsened);

  RecoveryConfig def;
  const Mesh big = build_mesh(3.0, def, 512, 4096);
  EXPECT_EQ(big.points.size(), 4001u);
  EXPECT_TRUE(big.coarsened);
  EXPECT_DOUBLE_EQ(big.step, 1.0 / 4000.0);

  const Mesh small = build_mesh(2.0, def, 64, 512);
  EXPECT_EQ(small.points.size(), 513u);
  EXPECT_FALSE(small.coarsened);
  EXPECT_DOUBLE_EQ(small.step, 1.0 / 512.0);

  for (double step : {0.3, 0.07, 1.0, 2.5}) {
    cfg.mesh_step = step;
    const Mesh e = build_mesh(1.0, cfg, 1, 1);
    EXPECT_EQ(e.points.front(), 0.0);
    EXPECT_EQ(e.points.back(), 1.0);
    EXPECT_TRUE(std::is_sorted(e.points.begin(), e.points.end()));
  }
  EXPECT_THROW(build_mesh(0.0, def, 1, 1), std::invalid_argument);
  cfg.mesh_step = -1.0;
  EXPECT_THROW(build_mesh(1.0, cfg, 1, 1), std::invalid_argument);
}

TEST(DefaultWeights, FirstScaleWhenNEqualsD) {
  for (std::size_t n : {16u, 256u, 1000u})
    EXPECT_NEAR(moment_error_scale(1, n, n), 4.0 / std::sqrt(static_cast<double>(n)), 1e-12);
  // i = 3, n = 100, d = 400: 6^6 * 400^{1/2} / 100^{3/2}.
  EXPECT_NEAR(moment_error_scale(3, 100, 400), 46656.0 * 20.0 / 1000.0, 1e-8);
}

TEST(DefaultWeights, DecreasingForUnitMoments) {
  const std::vector<double> ones(7, 1.0);
  const auto w = default_weights(256, 256, 7, ones);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_LT(w[i], w[i - 1]);
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_NEAR(w[i] * moment_error_scale(i + 1, 256, 256), 1.0, 1e-12);
}

TEST(DefaultWeights, FloorForSmallOrNegativeMoments) {
  const std::vector<double> alpha{0.5, -0.2, 0.0, 1e-9};
  const auto w = default_weights(50, 80, 4, alpha);
  for (double v : w) {
    EXPECT_GT(v, 0.0);
    EXPECT_TRUE(std::isfinite(v));
  }
  for (std::size_t i = 1; i < 4; ++i)
    EXPECT_NEAR(w[i], 1.0 / (moment_error_scale(i + 1, 50, 80) * kWeightMomentFloor), 1e-9 * w[i]);
  // Large k does not overflow.
  const std::vector<double> tiny(12, 1e-3);
  for (double v : default_weights(10, 100000, 12, tiny)) EXPECT_GT(v, 0.0);
}

TEST(RecoverDistribution, PointMassAtMeshPoint) {
  RecoveryConfig cfg;
  cfg.k_max = 7;
  const auto r = recover_distribution(exact_moments({0.5}, {1.0}, 7, 100, 100), cfg);
  EXPECT_DOUBLE_EQ(r.mesh_step, 0.01);
  EXPECT_LE(w1_to(r, {0.5}, {1.0}), r.mesh_step);
}

TEST(RecoverDistribution, AllOnesMeansMassAtOne) {
  RecoveryConfig cfg;
  MomentEstimate a;
  a.values.assign(7, 1.0);
  a.n = a.d = 64;
  const auto r = recover_distribution(a, cfg);
  EXPECT_LE(w1_to(r, {1.0}, {1.0}), r.mesh_step);
}

TEST(RecoverDistribution, TwoSpikeExactMoments) {
  RecoveryConfig cfg;
  cfg.b = 2.0;
  const auto r = recover_distribution(exact_moments({0.5, 1.0}, {0.5, 0.5}, 7, 512, 1024), cfg);
  EXPECT_LE(w1_to(r, {0.5, 1.0}, {0.5, 0.5}), 0.05);
}

TEST(RecoverDistribution, FeedThroughOfFewAtoms) {
  std::mt19937_64 gen(71);
  RecoveryConfig cfg;
  cfg.k_max = 7;
  const std::size_t nd = 200;  // mesh step 1/200
  std::uniform_int_distribution<int> idx(0, 200), atoms(1, 3);
  std::uniform_real_distribution<double> mass(0.15, 1.0);
  for (WeightScheme ws : {WeightScheme::theoretical, WeightScheme::uniform}) {
    cfg.weights = ws;
    for (int rep = 0; rep < 30; ++rep) {
      const int a = atoms(gen);
      std::vector<double> x, m;
      for (int j = 0; j < a; ++j) {
        x.push_back(idx(gen) / 200.0);
        m.push_back(mass(gen));
      }
      const double s = std::accumulate(m.begin(), m.end(), 0.0);
      for (double& v : m) v /= s;
      const auto r = recover_distribution(exact_moments(x, m, 7, nd, nd), cfg);
      EXPECT_EQ(r.status, SolveStatus::optimal);
      EXPECT_LE(w1_to(r, x, m), 3.0 * r.mesh_step) << "rep=" << rep << " atoms=" << a;
    }
  }
}

TEST(QuantileVector, Examples) {
  EXPECT_EQ(quantile_vector({{0.7}, {1.0}}, 3), (std::vector<double>{0.7, 0.7, 0.7}));
  EXPECT_EQ(quantile_vector({{0.0, 1.0}, {0.5, 0.5}}, 2), (std::vector<double>{0.0, 1.0}));
  // Level 1/2 lands exactly on the jump: the smaller point is chosen.
  EXPECT_EQ(quantile_vector({{0.0, 1.0}, {0.5, 0.5}}, 1), (std::vector<double>{0.0}));

  std::vector<double> x(11), m(11, 1.0 / 11.0);
  for (int j = 0; j <= 10; ++j) x[static_cast<std::size_t>(j)] = j / 10.0;
  const auto q = quantile_vector({x, m}, 10);
  std::vector<long> counts(11, 1);
  for (std::size_t i = 1; i <= 10; ++i) {
    EXPECT_EQ(q[i - 1], oracle::quantile_by_counts(x, counts, 11, static_cast<long>(i), 11));
    EXPECT_EQ(q[i - 1], x[i - 1]);
  }
  EXPECT_THROW(quantile_vector({{}, {}}, 2), std::invalid_argument);
}

TEST(QuantileVector, MatchesScanOracleOnRandomDistributions) {
  std::mt19937_64 gen(73);
  std::uniform_int_distribution<int> len(1, 40), cnt(0, 6), dd(1, 60);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto t = static_cast<std::size_t>(len(gen));
    std::vector<double> x(t);
    for (std::size_t j = 0; j < t; ++j) x[j] = static_cast<double>(j) / static_cast<double>(t);
    // Integer counts give exact CDF ties against i/(d+1) levels.
    std::vector<long> counts(t);
    long total = 0;
    for (auto& c : counts) total += (c = cnt(gen));
    if (total == 0) {
      counts[0] = 1;
      total = 1;
    }
    std::vector<double> m(t);
    for (std::size_t j = 0; j < t; ++j) m[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
    const auto d = static_cast<std::size_t>(dd(gen));
    const auto q = quantile_vector({x, m}, d);
    ASSERT_EQ(q.size(), d);
    for (std::size_t i = 1; i <= d; ++i) {
      const double level = static_cast<double>(i) / static_cast<double>(d + 1);
      EXPECT_EQ(q[i - 1], oracle::quantile_by_counts(x, counts, total, static_cast<long>(i),
                                                      static_cast<long>(d + 1)));
      EXPECT_EQ(q[i - 1], oracle::quantile_scan(x, m, level));
    }
  }
}

TEST(SpectrumVector, Validation) {
  EXPECT_NO_THROW(SpectrumVector({0.0, 1.0, 1.0}));
  EXPECT_THROW(SpectrumVector({1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(SpectrumVector({-0.1}), std::invalid_argument);
}

TEST(EstimateSpectrum, OutputShapeAndDeterminism) {
  CovarianceModel model{Family::toeplitz, 40};
  const DataMatrix y = sample(factor(model), 30, {}, 9);
  RecoveryConfig cfg;
  cfg.b = 2.0;
  const auto a = estimate_spectrum(y, cfg), b = estimate_spectrum(y, cfg);
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_TRUE(std::is_sorted(a.values().begin(), a.values().end()));
  for (double v : a.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, cfg.b);
  }
  cfg.k_max = 31;
  EXPECT_THROW(estimate_spectrum(y, cfg), std::invalid_argument);
}

TEST(EstimateSpectrum, OrthogonalSamplesCarryNoHigherMomentSignal) {
  // Y = sqrt(8) I_8 has Y^T Y / n = I, but its rows are orthogonal, so every
  // cycle through an off-diagonal entry of Y Y^T is zero and the unbiased
  // estimates of all moments beyond the first vanish.
  const DataMatrix y(Matrix::Identity(8, 8) * std::sqrt(8.0));
  RecoveryConfig cfg;
  cfg.b = 2.0;
  const auto est = estimate_spectrum_detailed(y, cfg);
  EXPECT_DOUBLE_EQ(est.moments.values[0], 0.5);
  for (std::size_t i = 1; i < 7; ++i) EXPECT_EQ(est.moments.values[i], 0.0);
  EXPECT_EQ(est.spectrum.size(), 8u);
  for (double v : est.spectrum.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, cfg.b);
  }
  // The empirical spectrum is exactly all ones.
  for (double v : empirical_spectrum(y)) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(EstimateSpectrum, BoundAndFourTimesBoundAgree) {
  struct Case {
    Family family;
    std::size_t n;
    double b;
  };
  for (const Case c : {Case{Family::identity, 64, 1.5}, Case{Family::two_spike, 1024, 3.0}}) {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
      CovarianceModel model{c.family, 64};
      const DataMatrix y = sample(factor(model), c.n, {}, seed);
      RecoveryConfig c1, c4;
      c1.b = c.b;
      c4.b = 4.0 * c.b;
      const auto s1 = estimate_spectrum(y, c1).values();
      const auto s4 = estimate_spectrum(y, c4).values();
      const double coarse_step = c4.b / static_cast<double>(std::max<std::size_t>(64, c.n));
      for (std::size_t i = 0; i < s1.size(); ++i)
        EXPECT_LE(std::abs(s1[i] - s4[i]), 2.0 * coarse_step) << to_string(c.family) << " seed=" << seed;
    }
  }
}

TEST(EstimateSpectrum, IdentityBeatsEmpirical) {
  CovarianceModel model{Family::identity, 512};
  const DataMatrix y = sample(factor(model), 256, {}, 1);
  RecoveryConfig cfg;
  cfg.b = 1.5;
  const auto rec = estimate_spectrum(y, cfg).values();
  const auto emp = empirical_spectrum(y);
  double er = 0.0, ee = 0.0;
  for (std::size_t i = 0; i < 512; ++i) {
    er += std::abs(rec[i] - 1.0);
    ee += std::abs(emp[i] - 1.0);
  }
  EXPECT_LE(er / 512.0, 0.15);
  EXPECT_LT(er, ee);
}

TEST(HeuristicBound, TwiceTopEigenvalue) {
  Matrix y = Matrix::Zero(4, 3);
  y(0, 0) = 2.0;
  y(1, 1) = 1.0;
  EXPECT_DOUBLE_EQ(heuristic_bound(DataMatrix(y)), 2.0 * 4.0 / 4.0);
  EXPECT_EQ(heuristic_bound(DataMatrix(Matrix::Zero(2, 2))), 1.0);
}

}  // namespace
}  // namespace specest
