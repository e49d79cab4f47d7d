#include "pweight/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pweight/errors.hpp"

namespace pweight {

std::vector<double> uniform_edges(double lo, double hi, double bin_width) {
  detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "bins: need lo < hi");
  detail::require(bin_width > 0.0, "bins: bin width must be positive");
  const double ratio = (hi - lo) / bin_width;
  const double n = std::round(ratio);
  detail::require(n >= 1.0 && std::fabs(ratio - n) <= 1e-9 * n,
                  "bins: (hi - lo) / bin_width must be a positive integer");
  const auto bins = static_cast<std::size_t>(n);
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + bin_width * static_cast<double>(i);
  edges.back() = hi;
  return edges;
}

void BinnedDensity::validate() const {
  detail::require(bin_width > 0.0, "binned density: bin width must be positive");
  detail::require(bin_edges.size() >= 2, "binned density: need at least one bin");
  detail::require(counts.size() + 1 == bin_edges.size(),
                  "binned density: counts must have one entry per bin");
  detail::require(total_observations > 0, "binned density: T must be positive");
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    const double width = bin_edges[i] - bin_edges[i - 1];
    detail::require(std::fabs(width - bin_width) <= 1e-12 * std::max(1.0, std::fabs(bin_edges[i])) +
                                                         1e-12 * bin_width,
                    "binned density: edges must be uniform with the stated width");
  }
  const auto binned = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  detail::require(binned <= total_observations, "binned density: counts exceed T");
}

BinnedDensity BinnedDensity::from_samples(std::span<const double> samples, double lo, double hi,
                                          double bin_width) {
  BinnedDensity out;
  out.bin_edges = uniform_edges(lo, hi, bin_width);
  out.bin_width = bin_width;
  out.counts.assign(out.bin_edges.size() - 1, 0);
  out.total_observations = samples.size();
  const auto bins = out.counts.size();
  for (double x : samples) {
    if (!(x >= lo && x < hi)) continue;
    auto i = static_cast<std::size_t>((x - lo) / bin_width);
    if (i >= bins) i = bins - 1;
    // Floating-point division can land one bin off near an edge.
    if (x < out.bin_edges[i] && i > 0) --i;
    else if (x >= out.bin_edges[i + 1] && i + 1 < bins) ++i;
    ++out.counts[i];
  }
  out.validate();
  return out;
}

DensityEstimate density_estimate(const BinnedDensity& binned) {
  binned.validate();
  const double norm = static_cast<double>(binned.total_observations) * binned.bin_width;
  DensityEstimate est;
  est.bin_width = binned.bin_width;
  const auto n = binned.counts.size();
  est.bin_centers.resize(n);
  est.p_hat.resize(n);
  est.epsilon.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<double>(binned.counts[i]);
    est.bin_centers[i] = 0.5 * (binned.bin_edges[i] + binned.bin_edges[i + 1]);
    est.p_hat[i] = c / norm;
    est.epsilon[i] = std::sqrt(c) / norm;
  }
  return est;
}

CountEstimate expected_count(double p, double bin_width, std::uint64_t series_length) {
  detail::require(p > 0.0, "expected_count: density must be positive");
  detail::require(bin_width > 0.0, "expected_count: bin width must be positive");
  detail::require(series_length > 0, "expected_count: T must be positive");
  detail::require(p * bin_width <= 1.0, "expected_count: p * dx must not exceed 1");
  const double mean = p * bin_width * static_cast<double>(series_length);
  return {mean, std::sqrt(mean)};
}

double binomial_band_mass(double p, std::uint64_t series_length, std::uint64_t lo,
                          std::uint64_t hi) {
  detail::require(p > 0.0 && p < 1.0, "binomial_band_mass: p must lie in (0,1)");
  detail::require(series_length > 0, "binomial_band_mass: T must be positive");
  detail::require(lo <= hi && hi <= series_length, "binomial_band_mass: need 0 <= lo <= hi <= T");
  const auto n = static_cast<double>(series_length);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const auto kk = static_cast<double>(k);
    terms.push_back(std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) +
                    kk * log_p + (n - kk) * log_q);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return std::min(1.0, std::exp(peak) * sum);
}

std::vector<double> decision_weights(const DensityEstimate& estimate, double multiplier) {
  const auto n = estimate.p_hat.size();
  detail::require(n > 0 && estimate.epsilon.size() == n, "decision_weights: size mismatch");
  detail::require(estimate.bin_width > 0.0, "decision_weights: bin width must be positive");
  detail::require(multiplier >= 0.0, "decision_weights: multiplier must be non-negative");
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(estimate.p_hat[i] >= 0.0 && estimate.epsilon[i] >= 0.0,
                    "decision_weights: estimates must be non-negative");
    w[i] = estimate.p_hat[i] + multiplier * estimate.epsilon[i];
    total += w[i];
  }
  if (!(total > 0.0)) throw DegenerateInputError("decision_weights: all-zero estimate");
  const double norm = total * estimate.bin_width;
  for (double& v : w) v /= norm;
  return w;
}

std::vector<double> default_analytic_grid(const DistributionSpec& spec) {
  spec.validate();
  constexpr std::size_t kPoints = 40001;
  const double half = 100.0 * spec.scale;
  std::vector<double> grid(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    grid[i] = spec.location - half +
              2.0 * half * static_cast<double>(i) / static_cast<double>(kPoints - 1);
  }
  return grid;
}

AnalyticWeights analytic_decision_weight_density(const DistributionSpec& spec, double t_delta_x,
                                                 std::span<const double> grid,
                                                 double multiplier) {
  spec.validate();
  detail::require(t_delta_x > 0.0, "analytic weights: T dx must be positive");
  detail::require(multiplier >= 0.0, "analytic weights: multiplier must be non-negative");
  detail::require(grid.size() >= 2, "analytic weights: grid needs at least 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    detail::require(grid[i] > grid[i - 1], "analytic weights: grid must be strictly increasing");
  }

  AnalyticWeights out;
  out.truncated_mass = cdf(spec, grid.front()) + (1.0 - cdf(spec, grid.back()));
  if (spec.family == Family::Gaussian && out.truncated_mass > 1e-3) {
    throw DomainError("analytic weights: grid too narrow, truncated mass " +
                      std::to_string(out.truncated_mass) + " exceeds 1e-3");
  }

  out.w.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = pdf(spec, grid[i]);
    out.w[i] = p + multiplier * std::sqrt(p / t_delta_x);
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    integral += 0.5 * (out.w[i] + out.w[i - 1]) * (grid[i] - grid[i - 1]);
  }
  for (double& v : out.w) v /= integral;
  return out;
}

CdfMapCurve density_cdf_map(const DistributionSpec& spec, std::span<const double> grid,
                            std::span<const double> w) {
  detail::require(grid.size() == w.size() && grid.size() >= 2, "density_cdf_map: size mismatch");
  CdfMapCurve curve;
  curve.do_label = describe(spec);
  curve.dm_label = "cautious estimate of " + describe(spec);
  double fw = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) fw += 0.5 * (w[i] + w[i - 1]) * (grid[i] - grid[i - 1]);
    const double fp = cdf(spec, grid[i]);
    if (!curve.points.empty() && !(fp > curve.points.back().fp)) continue;
    curve.points.push_back({fp, std::clamp(fw, 0.0, 1.0)});
  }
  return curve;
}

CdfMapCurve binned_cdf_map(const DistributionSpec& spec, std::span<const double> bin_edges,
                           std::span<const double> w) {
  detail::require(bin_edges.size() == w.size() + 1 && !w.empty(), "binned_cdf_map: size mismatch");
  CdfMapCurve curve;
  curve.do_label = describe(spec);
  curve.dm_label = "binned estimate";
  double fw = 0.0;
  for (std::size_t i = 0; i < bin_edges.size(); ++i) {
    if (i > 0) fw += w[i - 1] * (bin_edges[i] - bin_edges[i - 1]);
    const double fp = cdf(spec, bin_edges[i]);
    if (!curve.points.empty() && !(fp > curve.points.back().fp)) continue;
    curve.points.push_back({fp, std::clamp(fw, 0.0, 1.0)});
  }
  return curve;
}

RelativeErrors relative_error_decomposition(std::span<const double> p,
                                            std::span<const double> epsilon) {
  detail::require(p.size() == epsilon.size(), "relative errors: size mismatch");
  RelativeErrors out;
  out.rel_errors.assign(p.size(), std::numeric_limits<double>::quiet_NaN());
  double sum_p = 0.0;
  double sum_eps = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    detail::require(p[i] >= 0.0 && epsilon[i] >= 0.0, "relative errors: inputs must be non-negative");
    if (p[i] == 0.0) {
      out.excluded.push_back(i);
      continue;
    }
    out.rel_errors[i] = epsilon[i] / p[i];
    sum_p += p[i];
    sum_eps += epsilon[i];
  }
  if (!(sum_p > 0.0)) throw DegenerateInputError("relative errors: no bins with p > 0");
  // sum p (eps/p) dx / sum p dx; uniform dx cancels.
  out.weighted_mean = sum_eps / sum_p;
  return out;
}

}  // namespace pweight
