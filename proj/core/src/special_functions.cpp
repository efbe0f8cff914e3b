#include "sparsemix/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsemix {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Past this point erfc is close to the bottom of the normal double range and
// the asymptotic expansion of log Q is more accurate than log(erfc(.)).
constexpr double kAsymptoticTail = 37.0;

// log Q(t) for large positive t.
double log_sf_asymptotic(double t) {
  const double inv2 = 1.0 / (t * t);
  // 1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - 945/t^10
  const double series =
      1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * (105.0 - 945.0 * inv2))));
  return -0.5 * t * t - std::log(t) - kLogSqrt2Pi + std::log(series);
}

// Acklam's rational approximation, |rel err| < 1.2e-9. Only used as a
// starting point for refinement.
double acklam_lower(double p) {
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
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Quantile for p in (0, 1/2]; result is <= 0.
double lower_quantile(double p) {
  double x = acklam_lower(p);
  for (int iter = 0; iter < 3; ++iter) {
    const double density = normal_pdf(x);
    if (density == 0.0) {
      break;
    }
    const double u = (normal_cdf(x) - p) / density;
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(x))) {
      break;
    }
  }
  return x;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_log_sf(double x) {
  if (x >= kAsymptoticTail) {
    return log_sf_asymptotic(x);
  }
  if (x < 0.0) {
    return std::log1p(-normal_cdf(x));
  }
  return std::log(normal_sf(x));
}

double normal_log_cdf(double x) { return normal_log_sf(-x); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie strictly inside (0, 1)");
  }
  if (p <= 0.5) {
    return lower_quantile(p);
  }
  return -lower_quantile(1.0 - p);
}

double normal_isf(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("normal_isf: q must lie strictly inside (0, 1)");
  }
  return -normal_quantile(q);
}

QBounds q_bounds(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("q_bounds: x must be positive and finite");
  }
  const double density = normal_pdf(x);
  return {x * density / (1.0 + x * x), density / x};
}

}  // namespace sparsemix
