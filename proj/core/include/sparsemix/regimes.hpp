#ifndef SPARSEMIX_REGIMES_HPP_
#define SPARSEMIX_REGIMES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparsemix/model.hpp"

namespace sparsemix {

enum class Regime { Undetectable, DenseWeak, ModeratelySparseWeak, Moderate, Strong, OnBoundary };

/// The function g(n) against which log P_err is expected to scale.
enum class RateFunction {
  None,
  NEps2D2,   ///< n eps^2 (e^{mu^2} - 1)
  NEps,      ///< n eps
  MuSq,      ///< mu^2
  ModerateG  ///< n eps^2 e^{mu^2} Phi((beta / 2r - 3/2) mu)
};

/// How the predicted constant constrains lim log P / g(n).
enum class ConstantKind {
  None,
  Exact,          ///< the limit equals the constant
  UpperBound,     ///< limsup is at most the constant
  Indeterminate   ///< not characterized
};

enum class Scaling { SparseR, DensePower };

std::string to_string(Regime r);
std::string to_string(RateFunction f);
std::string to_string(ConstantKind k);
std::string to_string(Scaling s);

struct RateSpec {
  RateFunction fn = RateFunction::None;
  double constant = 0.0;
  ConstantKind kind = ConstantKind::None;
};

struct RegimeClass {
  Regime regime = Regime::OnBoundary;
  RateSpec fa;
  RateSpec md;
  double beta = 0.0;
  double r = 0.0;
  Scaling scaling = Scaling::SparseR;
  std::string note;

  [[nodiscard]] bool detectable() const {
    return regime != Regime::Undetectable && regime != Regime::OnBoundary;
  }
  [[nodiscard]] const RateSpec& rate(bool false_alarm) const { return false_alarm ? fa : md; }
};

/// Critical r of the sqrt(2 r log n) detection boundary for beta in (1/2, 1):
/// beta - 1/2 below 3/4, (1 - sqrt(1 - beta))^2 from 3/4 on.
double critical_r(double beta);

/// Detection boundary mu_crit at a given beta.
struct BoundaryPoint {
  enum class Kind { DensePowerCrit, SqrtLog } kind;
  double beta;
  /// Power beta - 1/2 of n (DensePowerCrit) or r_crit (SqrtLog).
  double value;
};
BoundaryPoint boundary_point(double beta);

/*
 * Places (beta, r) in the rate-characterization map.
 *
 * Regions are open; a point on any of the dividing curves (r = r_crit,
 * r = beta/3, r = beta, beta = 1/2, beta = 3/4 when it matters) is reported as
 * OnBoundary rather than assigned to a side.
 */
RegimeClass classify(double beta, double r, Scaling scaling);

/// Classification for an arbitrary parameterization. Explicit mu tables are
/// reduced to a power law mu ~ n^r fitted over the table (exactly constant
/// tables give r = 0).
RegimeClass classify(const ModelParams& params);

/// Arguments of g(n) in log form so that it can be evaluated for n far beyond
/// integer range.
struct RateArgs {
  double log_n;
  double log_eps;
  double mu;
  double beta;
  double r;
};

/// log g(n).
double log_rate_g(RateFunction fn, const RateArgs& args);

/// g(n) for a concrete model. ModerateG uses beta and r from `regime`.
double rate_g(RateFunction fn, const GaussianModel& model, double beta, double r);
double rate_g(const RateSpec& spec, const GaussianModel& model, const RegimeClass& regime);

/// Log-probability floor -n eps on P_MD for any test whose P_FA stays below 1.
double universal_md_bound(std::uint64_t n, double eps);

// ---------------------------------------------------------------------------

struct WeakConditionRow {
  std::uint64_t n;
  double gamma;
  double tail_condition;        ///< must vanish
  double eps2_chi2;             ///< eps^2 (e^{mu^2} - 1), must vanish
  double n_eps2_chi2;           ///< n eps^2 (e^{mu^2} - 1), must diverge
};

struct WeakConditionReport {
  std::vector<WeakConditionRow> rows;
  bool tail_decreasing = false;
  bool eps2_chi2_decreasing = false;
  bool n_eps2_chi2_increasing = false;

  [[nodiscard]] bool all_pass() const {
    return tail_decreasing && eps2_chi2_decreasing && n_eps2_chi2_increasing;
  }
};

std::vector<double> default_gamma_grid();

/*
 * Evaluates the three weak-signal conditions on an n-grid.
 *
 * A sequence counts as decreasing (increasing) when its least-squares slope
 * against log n is negative (positive) and its last value lies below (above)
 * its first. The tail condition has to trend down for every gamma. This is a
 * numerical trend check on a finite grid, not a proof of the limits.
 */
WeakConditionReport check_weak_conditions(const ModelParams& params,
                                          std::span<const std::uint64_t> n_grid,
                                          std::span<const double> gamma_grid);

}  // namespace sparsemix

#endif  // SPARSEMIX_REGIMES_HPP_
