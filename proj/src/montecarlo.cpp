#include "pweight/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pweight/errors.hpp"

namespace pweight {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs body(i) for i in [0, n) on a fixed partition of contiguous chunks.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

class Sampler {
 public:
  explicit Sampler(const DistributionSpec& spec) : spec_(spec) {
    if (spec.family == Family::StudentT) chi2_ = std::chi_squared_distribution<double>(*spec.shape);
  }

  double operator()(std::mt19937_64& rng) {
    const double z = normal_(rng);
    if (spec_.family == Family::Gaussian) return spec_.location + spec_.scale * z;
    const double v = chi2_(rng);
    return spec_.location + spec_.scale * z / std::sqrt(v / *spec_.shape);
  }

 private:
  DistributionSpec spec_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::chi_squared_distribution<double> chi2_{1.0};
};

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(stream_seed(seed, index));
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  auto rng = make_stream(seed, 0);
  Sampler draw(spec);
  std::vector<double> out(n);
  for (double& x : out) x = draw(rng);
  return out;
}

void SimConfig::validate() const {
  spec.validate();
  detail::require(series_length > 0, "series_length must be positive");
  detail::require(ensemble_size >= 1, "ensemble_size must be positive");
  uniform_edges(lo, hi, bin_width);
}

SimResult simulate_dm(const SimConfig& config, double multiplier, unsigned threads) {
  config.validate();
  const auto members = static_cast<std::size_t>(config.ensemble_size);
  std::vector<BinnedDensity> runs(members);
  parallel_for(members, threads, [&](std::size_t m) {
    auto rng = make_stream(config.seed, m);
    Sampler draw(config.spec);
    std::vector<double> series(config.series_length);
    for (double& x : series) x = draw(rng);
    runs[m] = BinnedDensity::from_samples(series, config.lo, config.hi, config.bin_width);
  });

  SimResult result;
  result.single_run_counts = runs.front();
  result.single_run = density_estimate(runs.front());
  const auto bins = result.single_run.p_hat.size();

  const double norm = static_cast<double>(config.series_length) * config.bin_width;
  result.ensemble_epsilon.assign(bins, 0.0);
  if (members >= 2) {
    for (std::size_t b = 0; b < bins; ++b) {
      double mean = 0.0;
      for (const auto& run : runs) mean += static_cast<double>(run.counts[b]) / norm;
      mean /= static_cast<double>(members);
      double ss = 0.0;
      for (const auto& run : runs) {
        const double d = static_cast<double>(run.counts[b]) / norm - mean;
        ss += d * d;
      }
      result.ensemble_epsilon[b] = std::sqrt(ss / static_cast<double>(members - 1));
    }
  }

  const bool any_counts = std::any_of(result.single_run_counts.counts.begin(),
                                      result.single_run_counts.counts.end(),
                                      [](std::uint64_t c) { return c > 0; });
  if (!any_counts) {
    throw DegenerateInputError("simulate_dm: no observations fell inside [" +
                               std::to_string(config.lo) + ", " + std::to_string(config.hi) + ")");
  }

  DensityEstimate cautious = result.single_run;
  cautious.epsilon = result.ensemble_epsilon;
  result.weights = decision_weights(cautious, multiplier);
  return result;
}

void GbmConfig::validate() const {
  detail::require(std::isfinite(drift), "drift must be finite");
  detail::require(std::isfinite(volatility) && volatility >= 0.0, "volatility must be non-negative");
  detail::require(std::isfinite(horizon) && horizon > 0.0, "horizon must be positive");
  detail::require(steps >= 1, "steps must be at least 1");
  detail::require(trajectories >= 1, "trajectories must be at least 1");
  detail::require(std::isfinite(initial_value) && initial_value > 0.0,
                  "initial_value must be positive");
}

GbmResult gbm_simulate(const GbmConfig& config, std::uint64_t budget, unsigned threads) {
  config.validate();
  if (config.steps > budget / config.trajectories) {
    throw ResourceError("gbm_simulate: steps * trajectories exceeds the budget of " +
                        std::to_string(budget));
  }
  const auto n = static_cast<std::size_t>(config.trajectories);
  const double dt = config.horizon / static_cast<double>(config.steps);
  const double noise_scale = config.volatility * std::sqrt(dt);
  const double log_drift =
      (config.drift - 0.5 * config.volatility * config.volatility) * config.horizon;

  // log(x_t / x_0) = (mu - sigma^2/2) t + sigma W_t, with W_t built from the
  // per-step increments.
  std::vector<double> log_final(n);
  parallel_for(n, threads, [&](std::size_t j) {
    double noise = 0.0;
    if (config.volatility > 0.0) {
      auto rng = make_stream(config.seed, j);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::uint64_t s = 0; s < config.steps; ++s) noise += noise_scale * normal(rng);
    }
    log_final[j] = log_drift + noise;
  });

  GbmResult out;
  out.time_growth.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.time_growth[j] = log_final[j] / config.horizon;

  const double peak = *std::max_element(log_final.begin(), log_final.end());
  double acc = 0.0;
  for (double l : log_final) acc += std::exp(l - peak);
  out.ensemble_mean_growth = (peak + std::log(acc / static_cast<double>(n))) / config.horizon;

  std::vector<double> sorted = out.time_growth;
  std::sort(sorted.begin(), sorted.end());
  out.median_time_growth =
      n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return out;
}

}  // namespace pweight
