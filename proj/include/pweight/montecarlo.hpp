#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pweight/dist.hpp"
#include "pweight/estimate.hpp"

namespace pweight {

/// Seed for the independent stream `index` derived from a master seed
/// (SplitMix64 finalizer over both words).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Engine for stream `index` of `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

/// n independent draws. Gaussian draws use std::normal_distribution; t draws
/// are a standard normal over sqrt(chi-square(nu) / nu).
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

struct SimConfig {
  DistributionSpec spec;
  std::uint64_t series_length = 100;
  double bin_width = 0.4;
  double lo = -6.0;
  double hi = 6.0;
  std::uint64_t ensemble_size = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimResult {
  /// Counts of the first ensemble member: the one series the DM actually sees.
  BinnedDensity single_run_counts;
  /// Estimate from that series (Poisson epsilon).
  DensityEstimate single_run;
  /// Per-bin standard deviation of p_hat across the ensemble.
  std::vector<double> ensemble_epsilon;
  /// Cautious weights from single_run.p_hat and ensemble_epsilon.
  std::vector<double> weights;
};

/// Runs `ensemble_size` independent series of length T. Members execute in
/// parallel on `threads` workers (0 = hardware concurrency); the reduction is
/// by member index, so output does not depend on thread count.
SimResult simulate_dm(const SimConfig& config, double multiplier = 1.0, unsigned threads = 0);

struct GbmConfig {
  double drift = 0.05;
  double volatility = 0.2;
  double horizon = 100.0;
  std::uint64_t steps = 100;
  std::uint64_t trajectories = 10000;
  double initial_value = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GbmResult {
  /// log(mean final / initial) / t
  double ensemble_mean_growth = 0.0;
  /// median over trajectories of log(final / initial) / t
  double median_time_growth = 0.0;
  /// Per-trajectory time-average growth rate log(final / initial) / t.
  std::vector<double> time_growth;
};

inline constexpr std::uint64_t kDefaultGbmBudget = 100'000'000;

/// Geometric Brownian motion with exact log-space increments. Throws
/// ResourceError when steps * trajectories exceeds `budget`.
GbmResult gbm_simulate(const GbmConfig& config, std::uint64_t budget = kDefaultGbmBudget,
                       unsigned threads = 0);

}  // namespace pweight
