#ifndef SPARSEMIX_EXPERIMENT_HPP_
#define SPARSEMIX_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsemix/config.hpp"
#include "sparsemix/estimation.hpp"
#include "sparsemix/rate_analysis.hpp"
#include "sparsemix/regimes.hpp"

namespace sparsemix {

struct RunOptions {
  /// Worker threads per cell. Never changes any result.
  unsigned threads = 1;
};

/// Seed for every cell at sample size n, so a given n reproduces across grids.
std::uint64_t cell_seed(std::uint64_t master, std::uint64_t n);

/// Shortest round-trip decimal form, "inf"/"-inf"/"nan" otherwise.
std::string format_real(double v);

// ---------------------------------------------------------------------------
// Rate experiment

struct RateRow {
  std::uint64_t n = 0;
  double g = 0.0;
  ErrorEstimate fa;
  ErrorEstimate md;
};

/// Direct and importance estimates at the first n at or above is_threshold_n.
/// The direct run uses trial indices past those of the importance run, so the
/// two are independent.
struct CrossoverCheck {
  bool ran = false;
  std::uint64_t n = 0;
  ErrorEstimate direct_fa;
  ErrorEstimate direct_md;
  bool fa_agrees = true;
  bool md_agrees = true;

  [[nodiscard]] bool pass() const { return fa_agrees && md_agrees; }
};

struct FitReport {
  ErrorKind error = ErrorKind::FalseAlarm;
  RateSpec spec;
  std::optional<RateFit> fit;
  std::optional<TheoryVerdict> verdict;
  std::vector<ExcludedPoint> excluded;
  /// Why no fit or verdict was produced, if so.
  std::string skipped;
};

struct RateExperimentResult {
  RegimeClass regime;
  std::vector<RateRow> rows;
  CrossoverCheck crossover;
  std::vector<FitReport> fits;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;

  /// All verdicts that could be evaluated pass and the crossover agrees.
  [[nodiscard]] bool all_pass() const;
  /// Columns n,g,p_fa,se_fa,method_fa,p_md,se_md,method_md.
  [[nodiscard]] std::string csv() const;
  [[nodiscard]] std::string fits_json() const;
};

/// Agreement within `k` combined standard errors.
bool agree_within(const ErrorEstimate& a, const ErrorEstimate& b, double k);

/*
 * Estimates both error probabilities of the oracle likelihood ratio test over
 * the n grid (direct Monte Carlo below is_threshold_n, importance sampling from
 * it on), fits log P against the regime's g(n) and compares the slopes with
 * the predicted constants. Throws std::domain_error for parameters on or below
 * the detection boundary.
 */
RateExperimentResult run_rate_experiment(const ExperimentConfig& config, const RunOptions& run);

// ---------------------------------------------------------------------------
// Adaptive tests

struct AdaptiveRow {
  std::uint64_t n = 0;
  TestKind test = TestKind::Lrt;
  CalibratedThreshold threshold;
  /// method "analytic" for the max test; otherwise taken from `estimate`.
  std::string method;
  double p_md = 0.0;
  double se_md = 0.0;
  /// p_md is the resolution floor 1/trials, not an estimate.
  bool upper_bound = false;
  std::optional<ErrorEstimate> estimate;
};

struct AdaptiveResult {
  std::vector<AdaptiveRow> rows;
  std::vector<std::string> warnings;

  [[nodiscard]] std::string csv() const;
};

/*
 * Miss-detection probability of each configured test at each false-alarm
 * level. Thresholds are calibrated on the calibration substream (analytically
 * for the max test) and P_MD is estimated on the evaluation substream; the
 * max test's P_MD is exact.
 */
AdaptiveResult run_adaptive_comparison(const ExperimentConfig& config, const RunOptions& run);

/// Threshold table only (the calibration half of run_adaptive_comparison).
AdaptiveResult run_calibration(const ExperimentConfig& config, const RunOptions& run);
std::string calibration_csv(const AdaptiveResult& result);

// ---------------------------------------------------------------------------
// Regime map

struct RegimeMapRow {
  double beta;
  double r;
  RegimeClass cls;
};

std::vector<RegimeMapRow> emit_regime_map(const std::vector<double>& beta_grid,
                                          const std::vector<double>& r_grid, Scaling scaling);
std::string regime_map_csv(const std::vector<RegimeMapRow>& rows);

}  // namespace sparsemix

#endif  // SPARSEMIX_EXPERIMENT_HPP_
