#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "pweight/errors.hpp"
#include "pweight/montecarlo.hpp"

using namespace pweight;

TEST(Streams, DistinctAndReproducible) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t i = 0; i < 256; ++i) seeds.insert(stream_seed(s, i));
  }
  EXPECT_EQ(seeds.size(), 4u * 256u);
  auto a = make_stream(3, 7);
  auto b = make_stream(3, 7);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}

TEST(Sample, MeanWithinLawOfLargeNumbersBound) {
  const std::size_t n = 100000;
  const auto xs = sample(DistributionSpec::gaussian(0.0, 2.0), n, 42);
  ASSERT_EQ(xs.size(), n);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  EXPECT_LT(std::fabs(mean), 4.0 * 2.0 / std::sqrt(static_cast<double>(n)));
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  EXPECT_NEAR(var / (n - 1), 4.0, 0.1);
}

TEST(Sample, Deterministic) {
  const auto spec = DistributionSpec::student_t(0.0, 1.0, 1.5);
  EXPECT_EQ(sample(spec, 1000, 9), sample(spec, 1000, 9));
  EXPECT_NE(sample(spec, 1000, 9), sample(spec, 1000, 10));
}

TEST(Sample, StudentTQuantilesMatchCdf) {
  const auto spec = DistributionSpec::student_t(0.5, 2.0, 3.0);
  const std::size_t n = 200000;
  const auto xs = sample(spec, n, 4);
  for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double x = quantile(spec, q);
    const auto below = std::count_if(xs.begin(), xs.end(), [&](double v) { return v < x; });
    const double sd = std::sqrt(q * (1 - q) / n);
    EXPECT_NEAR(static_cast<double>(below) / n, q, 5 * sd) << q;
  }
}

TEST(SimConfig, Validation) {
  SimConfig c;
  c.validate();
  c.series_length = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SimConfig{};
  c.ensemble_size = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SimConfig{};
  c.bin_width = 0.35;
  EXPECT_THROW(c.validate(), DomainError);
  c = SimConfig{};
  c.spec.scale = -1;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(SimulateDm, ShapesAndInvariants) {
  SimConfig c;
  c.spec = DistributionSpec::gaussian(0.0, 2.0);
  c.ensemble_size = 200;
  const auto r = simulate_dm(c, 1.0, 2);
  const std::size_t bins = 30;
  ASSERT_EQ(r.single_run.p_hat.size(), bins);
  ASSERT_EQ(r.ensemble_epsilon.size(), bins);
  ASSERT_EQ(r.weights.size(), bins);
  EXPECT_EQ(r.single_run_counts.total_observations, 100u);
  double mass = 0.0;
  for (double w : r.weights) {
    EXPECT_GE(w, 0.0);
    mass += w * c.bin_width;
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  // The ensemble spread matches the Poisson-like sqrt(p / T dx) in the bulk.
  const std::size_t mid = bins / 2;
  const double p_mid = (cdf(c.spec, 0.4) - cdf(c.spec, 0.0)) / 0.4;
  const double expect = std::sqrt(p_mid * (1 - p_mid * 0.4) / (100 * 0.4));
  EXPECT_NEAR(r.ensemble_epsilon[mid], expect, 0.15 * expect);
}

TEST(SimulateDm, IndependentOfThreadCount) {
  SimConfig c;
  c.spec = DistributionSpec::student_t(0.0, 1.0, 1.5);
  c.ensemble_size = 300;
  c.seed = 17;
  const auto a = simulate_dm(c, 1.0, 1);
  const auto b = simulate_dm(c, 1.0, 4);
  const auto d = simulate_dm(c, 1.0, 0);
  EXPECT_EQ(a.ensemble_epsilon, b.ensemble_epsilon);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.weights, d.weights);
  EXPECT_EQ(a.single_run_counts.counts, b.single_run_counts.counts);
}

TEST(SimulateDm, SingleRunIsFirstStream) {
  SimConfig c;
  c.spec = DistributionSpec::gaussian(0.0, 2.0);
  c.ensemble_size = 5;
  c.seed = 99;
  const auto r = simulate_dm(c);
  const auto xs = sample(c.spec, c.series_length, c.seed);
  const auto b = BinnedDensity::from_samples(xs, c.lo, c.hi, c.bin_width);
  EXPECT_EQ(r.single_run_counts.counts, b.counts);
}

TEST(SimulateDm, DegenerateWhenNothingLandsInRange) {
  SimConfig c;
  c.spec = DistributionSpec::gaussian(1000.0, 1.0);
  c.ensemble_size = 3;
  EXPECT_THROW(simulate_dm(c), DegenerateInputError);
}

TEST(Gbm, ZeroVolatilityIsExact) {
  GbmConfig c;
  c.volatility = 0.0;
  c.trajectories = 100;
  const auto r = gbm_simulate(c);
  EXPECT_NEAR(r.ensemble_mean_growth, 0.05, 1e-12);
  EXPECT_NEAR(r.median_time_growth, 0.05, 1e-12);
}

TEST(Gbm, EnsembleVersusTimeAverage) {
  GbmConfig c;
  const auto r = gbm_simulate(c);
  ASSERT_EQ(r.time_growth.size(), 10000u);
  EXPECT_NEAR(r.median_time_growth, 0.03, 0.005);
  EXPECT_NEAR(r.ensemble_mean_growth, 0.05, 0.01);
  EXPECT_GT(r.ensemble_mean_growth, r.median_time_growth);
}

TEST(Gbm, DeterministicAcrossThreads) {
  GbmConfig c;
  c.trajectories = 2000;
  c.seed = 7;
  const auto a = gbm_simulate(c, kDefaultGbmBudget, 1);
  const auto b = gbm_simulate(c, kDefaultGbmBudget, 3);
  EXPECT_EQ(a.time_growth, b.time_growth);
  EXPECT_EQ(a.ensemble_mean_growth, b.ensemble_mean_growth);
}

TEST(Gbm, Errors) {
  GbmConfig c;
  EXPECT_THROW(gbm_simulate(c, 1000), ResourceError);
  c.steps = 0;
  EXPECT_THROW(gbm_simulate(c), DomainError);
  c = GbmConfig{};
  c.initial_value = 0.0;
  EXPECT_THROW(gbm_simulate(c), DomainError);
  c = GbmConfig{};
  c.volatility = -0.1;
  EXPECT_THROW(gbm_simulate(c), DomainError);
}
