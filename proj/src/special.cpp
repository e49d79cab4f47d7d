#include "pweight/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pweight/errors.hpp"

namespace pweight::special {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

// Stirling series remainder lgamma(x) - [(x - 1/2) log x - x + log sqrt(2 pi)],
// valid for x >= 10 to double precision.
double stirling_correction(double x) {
  const double x2 = 1.0 / (x * x);
  return (1.0 / 12.0 +
          x2 * (-1.0 / 360.0 +
                x2 * (1.0 / 1260.0 +
                      x2 * (-1.0 / 1680.0 +
                            x2 * (1.0 / 1188.0 +
                                  x2 * (-691.0 / 360360.0 + x2 * (1.0 / 156.0))))))) /
         x;
}

double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTolerance) return h;
  }
  throw DomainError("reg_inc_beta: continued fraction did not converge for a=" +
                    std::to_string(a) + ", b=" + std::to_string(b) +
                    ", x=" + std::to_string(x));
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal_quantile: q must lie in (0,1), got " + std::to_string(q));
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  constexpr double kHigh = 1.0 - kLow;

  double x;
  if (q < kLow) {
    const double r = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (q <= kHigh) {
    const double s = q - 0.5;
    const double r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }

  // Halley step. Work in the tail that keeps the residual well conditioned.
  const double e = (x <= 0.0) ? normal_cdf(x) - q : (1.0 - q) - normal_cdf(-x);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  if (std::isfinite(u)) x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double log_beta(double a, double b) {
  const double p = std::fmin(a, b);
  const double q = std::fmax(a, b);
  if (p >= 10.0) {
    const double corr = stirling_correction(p) + stirling_correction(q) -
                        stirling_correction(p + q);
    return -0.5 * std::log(q) + kLogSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_correction(q) - stirling_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("reg_inc_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("reg_inc_beta: x must lie in [0,1], got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace pweight::special
