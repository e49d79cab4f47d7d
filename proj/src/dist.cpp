#include "pweight/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pweight/errors.hpp"
#include "pweight/special.hpp"

namespace pweight {
namespace {

// Student-t CDF for a standardized argument, two-branch incomplete beta form.
double t_cdf_std(double t, double nu) {
  const double half_tail = 0.5 * special::reg_inc_beta(nu / (t * t + nu), 0.5 * nu, 0.5);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double t_pdf_std(double t, double nu) {
  const double log_density = -special::log_beta(0.5 * nu, 0.5) - 0.5 * std::log(nu) -
                             0.5 * (nu + 1.0) * std::log1p(t * t / nu);
  return std::exp(log_density);
}

// Lower-tail quantile, q in (0, 0.5). Newton on the CDF inside a bracket that
// always contains the root; a step that leaves the bracket is replaced by
// bisection.
double t_quantile_lower(double q, double nu) {
  double seed = nu < 2.0 ? std::tan(std::numbers::pi * (q - 0.5))
                         : special::normal_quantile(q);
  if (!(seed < 0.0)) seed = -1.0;

  double hi = 0.0;  // cdf(hi) = 0.5 > q
  double lo = seed;
  while (t_cdf_std(lo, nu) > q) {
    hi = lo;
    lo *= 2.0;
    if (!std::isfinite(lo)) throw DomainError("quantile: could not bracket root");
  }

  double t = std::clamp(seed, lo, hi);
  for (int it = 0; it < 300; ++it) {
    const double g = t_cdf_std(t, nu) - q;
    if (g == 0.0) return t;
    if (g > 0.0) hi = t; else lo = t;
    const double slope = t_pdf_std(t, nu);
    double next = t - g / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                     std::fmax(1.0, std::fabs(t))) {
      return next;
    }
    t = next;
  }
  return t;
}

}  // namespace

DistributionSpec DistributionSpec::gaussian(double location, double scale) {
  DistributionSpec spec{Family::Gaussian, location, scale, std::nullopt};
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::student_t(double location, double scale, double shape) {
  DistributionSpec spec{Family::StudentT, location, scale, shape};
  spec.validate();
  return spec;
}

void DistributionSpec::validate() const {
  detail::require(std::isfinite(location), "location must be finite");
  detail::require(std::isfinite(scale) && scale > 0.0, "scale must be positive");
  if (family == Family::Gaussian) {
    detail::require(!shape.has_value(), "shape is only valid for the t family");
  } else {
    detail::require(shape.has_value(), "shape is required for the t family");
    detail::require(std::isfinite(*shape) && *shape > 0.0, "shape must be positive");
  }
}

std::string describe(const DistributionSpec& spec) {
  std::ostringstream os;
  os.precision(12);
  if (spec.family == Family::Gaussian) {
    os << "gaussian(" << spec.location << "," << spec.scale << ")";
  } else {
    os << "t(" << spec.location << "," << spec.scale << "," << spec.shape.value_or(0.0) << ")";
  }
  return os.str();
}

double standardize(double x, double location, double scale) {
  detail::require(scale > 0.0, "standardize: scale must be positive");
  return (x - location) / scale;
}

double pdf(const DistributionSpec& spec, double x) {
  spec.validate();
  const double z = standardize(x, spec.location, spec.scale);
  if (spec.family == Family::Gaussian) return special::normal_pdf(z) / spec.scale;
  return t_pdf_std(z, *spec.shape) / spec.scale;
}

double cdf(const DistributionSpec& spec, double x) {
  spec.validate();
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double z = standardize(x, spec.location, spec.scale);
  if (spec.family == Family::Gaussian) return special::normal_cdf(z);
  return t_cdf_std(z, *spec.shape);
}

double quantile(const DistributionSpec& spec, double q) {
  spec.validate();
  detail::require(q > 0.0 && q < 1.0, "quantile: q must lie in (0,1)");
  double z;
  if (spec.family == Family::Gaussian) {
    z = special::normal_quantile(q);
  } else if (q == 0.5) {
    z = 0.0;
  } else if (q < 0.5) {
    z = t_quantile_lower(q, *spec.shape);
  } else {
    z = -t_quantile_lower(1.0 - q, *spec.shape);
  }
  return spec.location + spec.scale * z;
}

double reg_inc_beta(double x, double a, double b) { return special::reg_inc_beta(x, a, b); }

}  // namespace pweight
