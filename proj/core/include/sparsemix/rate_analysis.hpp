#ifndef SPARSEMIX_RATE_ANALYSIS_HPP_
#define SPARSEMIX_RATE_ANALYSIS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparsemix/estimation.hpp"
#include "sparsemix/regimes.hpp"

namespace sparsemix {

/// One (g(n), log P) pair.
struct RatePoint {
  std::uint64_t n = 0;
  double g_value = 0.0;
  double log_p = 0.0;
  /// Delta-method standard error std_err / p_hat.
  double log_p_stderr = 0.0;
};

struct ExcludedPoint {
  std::uint64_t n;
  std::string reason;
};

/// Points for one error kind. Zero estimates cannot be logged and are kept
/// aside with the reason instead of being imputed.
struct RateSeries {
  std::vector<RatePoint> points;
  std::vector<ExcludedPoint> excluded;

  void add(std::uint64_t n, double g_value, const ErrorEstimate& estimate);
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::uint64_t n_min_used = 0;
  std::size_t points = 0;
  RateFunction rate_fn = RateFunction::None;
};

/// Unweighted least squares of log_p on g_value over the points with
/// n >= n_min. Throws if fewer than 3 points remain or all g are equal.
RateFit fit_rate(std::span<const RatePoint> points, std::uint64_t n_min,
                 RateFunction rate_fn = RateFunction::None);

/// Default fitting cutoff: the dense fits discard n below 1.75% of the largest
/// n, the moderately sparse ones below 0.5%; other regimes use every point.
std::uint64_t default_fit_n_min(Regime regime, std::uint64_t max_n);

struct TheoryVerdict {
  bool pass = false;
  /// Outcome of the constant check (exact or upper bound).
  bool constant_ok = false;
  /// Universal floor slope >= -1 - tol; only evaluated for strong-regime MD.
  bool floor_checked = false;
  bool floor_ok = true;
  double slope = 0.0;
  double constant = 0.0;
  ConstantKind kind = ConstantKind::None;
  double tolerance = 0.0;
  std::string detail;
};

/*
 * Checks a fitted slope against a predicted constant.
 *
 * Exact: |slope - c| <= tol. UpperBound: slope <= c + tol. For miss detection
 * in the strong regime the floor slope >= -1 - tol is required as well.
 */
TheoryVerdict compare_to_theory(const RateFit& fit, const RateSpec& spec, Regime regime,
                                ErrorKind error, double tolerance);

/// Floor check alone.
bool md_floor_holds(double slope, double tolerance);

}  // namespace sparsemix

#endif  // SPARSEMIX_RATE_ANALYSIS_HPP_
