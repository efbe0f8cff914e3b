#include "sparsemix/rate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sparsemix {

void RateSeries::add(std::uint64_t n, double g_value, const ErrorEstimate& estimate) {
  if (estimate.is_zero()) {
    excluded.push_back({n, "zero estimate (p <= 1/" + std::to_string(estimate.trials) + ")"});
    return;
  }
  if (!std::isfinite(g_value)) {
    excluded.push_back({n, "rate function not finite"});
    return;
  }
  points.push_back({n, g_value, std::log(estimate.p_hat), estimate.relative_std_err()});
}

RateFit fit_rate(std::span<const RatePoint> points, std::uint64_t n_min, RateFunction rate_fn) {
  double k = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : points) {
    if (p.n >= n_min) {
      k += 1.0;
      sx += p.g_value;
      sy += p.log_p;
    }
  }
  if (k < 3.0) {
    throw std::invalid_argument("fit_rate: fewer than 3 points with n >= n_min");
  }
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    if (p.n >= n_min) {
      const double dx = p.g_value - mx;
      const double dy = p.log_p - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("fit_rate: all g values are equal");
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.slope_stderr = std::sqrt(sse / (k - 2.0) / sxx);
  fit.n_min_used = n_min;
  fit.points = static_cast<std::size_t>(k);
  fit.rate_fn = rate_fn;
  return fit;
}

std::uint64_t default_fit_n_min(Regime regime, std::uint64_t max_n) {
  const double m = static_cast<double>(max_n);
  switch (regime) {
    case Regime::DenseWeak:
      return static_cast<std::uint64_t>(m * 0.0175);
    case Regime::ModeratelySparseWeak:
      return static_cast<std::uint64_t>(m * 0.005);
    default:
      return 0;
  }
}

bool md_floor_holds(double slope, double tolerance) { return slope >= -1.0 - tolerance; }

TheoryVerdict compare_to_theory(const RateFit& fit, const RateSpec& spec, Regime regime,
                                ErrorKind error, double tolerance) {
  if (spec.fn == RateFunction::None || spec.kind == ConstantKind::None ||
      spec.kind == ConstantKind::Indeterminate) {
    throw std::invalid_argument("compare_to_theory: regime has no characterized rate");
  }
  if (fit.rate_fn != RateFunction::None && fit.rate_fn != spec.fn) {
    throw std::invalid_argument("compare_to_theory: fit uses " + to_string(fit.rate_fn) +
                                " but the regime predicts " + to_string(spec.fn));
  }
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("compare_to_theory: tolerance must be non-negative");
  }
  TheoryVerdict v;
  v.slope = fit.slope;
  v.constant = spec.constant;
  v.kind = spec.kind;
  v.tolerance = tolerance;
  if (spec.kind == ConstantKind::Exact) {
    v.constant_ok = std::abs(fit.slope - spec.constant) <= tolerance;
  } else {
    v.constant_ok = fit.slope <= spec.constant + tolerance;
  }
  if (regime == Regime::Strong && error == ErrorKind::MissDetection) {
    v.floor_checked = true;
    v.floor_ok = md_floor_holds(fit.slope, tolerance);
  }
  v.pass = v.constant_ok && v.floor_ok;

  char buf[160];
  std::snprintf(buf, sizeof buf, "slope %.4f vs %s %.4f (tol %.3g)%s", fit.slope,
                spec.kind == ConstantKind::Exact ? "limit" : "bound", spec.constant, tolerance,
                v.floor_checked ? (v.floor_ok ? ", floor ok" : ", below floor -1") : "");
  v.detail = buf;
  return v;
}

}  // namespace sparsemix
