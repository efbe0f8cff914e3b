#ifndef SPARSEMIX_SPECIAL_FUNCTIONS_HPP_
#define SPARSEMIX_SPECIAL_FUNCTIONS_HPP_

namespace sparsemix {

/// Standard normal cumulative distribution function.
double normal_cdf(double x);

/// Upper tail Q(x) = 1 - Phi(x). Computed from erfc so it keeps relative
/// accuracy deep into the right tail.
double normal_sf(double x);

/// log Phi(x), finite for all finite x (asymptotic series below the
/// underflow point of erfc).
double normal_log_cdf(double x);

/// log Q(x).
double normal_log_sf(double x);

double normal_pdf(double x);

/*
 * Inverse of the normal cdf for p in (0, 1).
 *
 * Rational initial guess (Acklam) followed by Halley refinement on the cdf.
 * For p > 1/2 the refinement runs on 1 - p, which is exact in double, so the
 * result is as accurate as the representation of p allows.
 */
double normal_quantile(double p);

/// Inverse of Q: returns x with Q(x) = q, q in (0, 1). Use this instead of
/// normal_quantile(1 - q) when q is small.
double normal_isf(double q);

struct QBounds {
  double lower;
  double upper;
};

/// Elementary Mills-ratio bounds on Q(x) for x > 0:
///   x phi(x) / (1 + x^2) <= Q(x) <= phi(x) / x.
QBounds q_bounds(double x);

}  // namespace sparsemix

#endif  // SPARSEMIX_SPECIAL_FUNCTIONS_HPP_
