#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pweight/dist.hpp"
#include "pweight/weightmap.hpp"

namespace pweight {

/// Histogram of a finite series of T observations on uniform bins of width dx.
/// Observations outside the binned range count toward T but not toward any bin.
struct BinnedDensity {
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_observations = 0;
  double bin_width = 0.0;

  void validate() const;

  static BinnedDensity from_samples(std::span<const double> samples, double lo, double hi,
                                    double bin_width);
};

/// Uniform edges lo, lo + dx, ..., hi. (hi - lo) / dx must be a positive
/// integer to within 1e-9 relative.
std::vector<double> uniform_edges(double lo, double hi, double bin_width);

struct DensityEstimate {
  std::vector<double> bin_centers;
  std::vector<double> p_hat;
  std::vector<double> epsilon;
  double bin_width = 0.0;
};

/// p_hat = n / (T dx), epsilon = sqrt(n) / (T dx).
DensityEstimate density_estimate(const BinnedDensity& binned);

struct CountEstimate {
  double estimate;
  double uncertainty;
};

/// Expected count p dx T and its Poisson spread sqrt(p dx T).
CountEstimate expected_count(double p, double bin_width, std::uint64_t series_length);

/// P(lo <= K <= hi) for K ~ Binomial(T, p), summed in log space.
double binomial_band_mass(double p, std::uint64_t series_length, std::uint64_t lo,
                          std::uint64_t hi);

/// Cautious weights (p_hat + k eps) / sum_j (p_hat_j + k eps_j) dx, with k the
/// standard-error multiplier. Integrates to one over the bins.
std::vector<double> decision_weights(const DensityEstimate& estimate, double multiplier = 1.0);

struct AnalyticWeights {
  std::vector<double> w;
  /// Probability mass of the spec outside the grid.
  double truncated_mass = 0.0;
};

/// w(x) proportional to p(x) + k sqrt(p(x) / T dx), normalized by trapezoid
/// quadrature over `grid`. For Gaussian specs, a grid that leaves more than
/// 1e-3 of the mass outside is rejected. Heavy-tailed specs are normalized
/// over the finite grid as given.
AnalyticWeights analytic_decision_weight_density(const DistributionSpec& spec,
                                                 double t_delta_x,
                                                 std::span<const double> grid,
                                                 double multiplier = 1.0);

/// Uniform grid of location +- 100 scale with 40001 points.
std::vector<double> default_analytic_grid(const DistributionSpec& spec);

/// F_p from the spec's CDF, F_w from cumulative trapezoid integration of `w`.
CdfMapCurve density_cdf_map(const DistributionSpec& spec, std::span<const double> grid,
                            std::span<const double> w);

/// F_p from the spec's CDF at bin edges, F_w from cumulative bin weights.
CdfMapCurve binned_cdf_map(const DistributionSpec& spec, std::span<const double> bin_edges,
                           std::span<const double> w);

struct RelativeErrors {
  /// eps_i / p_i; NaN for excluded bins (p_i == 0).
  std::vector<double> rel_errors;
  /// Expectation of eps/p under the density p over the valid bins.
  double weighted_mean = 0.0;
  std::vector<std::size_t> excluded;
};

RelativeErrors relative_error_decomposition(std::span<const double> p,
                                            std::span<const double> epsilon);

}  // namespace pweight
