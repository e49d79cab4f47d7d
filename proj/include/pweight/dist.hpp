#pragma once

#include <optional>
#include <string>

namespace pweight {

enum class Family { Gaussian, StudentT };

/// A location-scale member of the Gaussian or Student-t family.
///
/// `shape` is the degrees-of-freedom parameter and is present exactly when the
/// family is StudentT. A scale ratio between two specs plays the role of the
/// "how much wider" factor between two observers' models; it is never stored
/// separately.
struct DistributionSpec {
  Family family = Family::Gaussian;
  double location = 0.0;
  double scale = 1.0;
  std::optional<double> shape;

  static DistributionSpec gaussian(double location, double scale);
  static DistributionSpec student_t(double location, double scale, double shape);

  /// Throws DomainError naming the offending field.
  void validate() const;

  bool operator==(const DistributionSpec&) const = default;
};

/// e.g. "gaussian(0,1)" or "t(0.2,1,3)".
std::string describe(const DistributionSpec& spec);

double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);

/// Inverse CDF. Throws DomainError unless 0 < q < 1.
double quantile(const DistributionSpec& spec, double q);

/// (x - location) / scale. Throws DomainError if scale <= 0.
double standardize(double x, double location, double scale);

/// Regularized incomplete beta I_x(a, b); see special::reg_inc_beta.
double reg_inc_beta(double x, double a, double b);

}  // namespace pweight
