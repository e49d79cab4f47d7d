#pragma once

// Special functions backing the distribution layer.

namespace pweight::special {

/// Standard normal CDF, Phi(z).
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

/// Inverse of the standard normal CDF for q in (0,1).
///
/// Rational approximation (Acklam) followed by one Halley refinement step on
/// the erfc-based CDF; absolute error is below 1e-12 over (1e-300, 1 - 1e-16).
/// Throws DomainError outside (0,1).
double normal_quantile(double q);

/// log B(a, b), accurate for large arguments where lgamma differences cancel.
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b).
///
/// Lentz continued fraction with the usual reflection for x > (a+1)/(a+b+2).
/// Throws DomainError for x outside [0,1] or non-positive a, b.
double reg_inc_beta(double x, double a, double b);

inline constexpr int kBetaMaxIterations = 200;
inline constexpr double kBetaTolerance = 1e-14;

}  // namespace pweight::special
