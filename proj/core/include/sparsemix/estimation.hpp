#ifndef SPARSEMIX_ESTIMATION_HPP_
#define SPARSEMIX_ESTIMATION_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsemix/detectors.hpp"
#include "sparsemix/model.hpp"
#include "sparsemix/parallel.hpp"
#include "sparsemix/random.hpp"

namespace sparsemix {

enum class ErrorKind { FalseAlarm, MissDetection };
enum class EstimatorKind { DirectMC, ImportanceSampled };

std::string to_string(ErrorKind kind);
std::string to_string(EstimatorKind kind);

struct EstimationOptions {
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  /// Index of the first trial; lets a run be split into disjoint pieces.
  std::uint64_t first_trial = 0;
  unsigned threads = 1;
  StreamPurpose purpose = StreamPurpose::Evaluation;
};

/*
 * Estimated error probability.
 *
 * `sum` and `sum_sq` are the ordered sums of the per-trial values (0/1
 * indicators for direct Monte Carlo, likelihood-ratio weighted indicators for
 * importance sampling); p_hat and std_err are derived from them, which is what
 * makes merge() exact.
 */
struct ErrorEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  EstimatorKind method = EstimatorKind::DirectMC;
  ErrorKind error = ErrorKind::FalseAlarm;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;
  StreamId stream{};
  double sum = 0.0;
  double sum_sq = 0.0;

  /// A zero estimate carries no information beyond p <= 1/trials.
  [[nodiscard]] bool is_zero() const { return p_hat == 0.0; }
  [[nodiscard]] double resolution_floor() const { return 1.0 / static_cast<double>(trials); }
  [[nodiscard]] double relative_std_err() const {
    return p_hat > 0.0 ? std_err / p_hat : std::numeric_limits<double>::infinity();
  }
};

/// Builds an estimate from ordered accumulators.
ErrorEstimate summarize(EstimatorKind method, ErrorKind error, std::uint64_t trials,
                        std::uint64_t seed, std::uint64_t first_trial, StreamId stream,
                        double sum, double sum_sq);

/// Combines estimates over adjacent trial ranges of the same substream family.
ErrorEstimate merge(const ErrorEstimate& first, const ErrorEstimate& second);

/// Stream family used for estimating `error`.
constexpr StreamId stream_for(ErrorKind error, StreamPurpose purpose) {
  return {error == ErrorKind::FalseAlarm ? StreamTarget::FalseAlarm : StreamTarget::MissDetection,
          purpose};
}

/*
 * Direct Monte Carlo. Draws `trials` n-vectors under `hyp` and counts errors:
 * rejections under the null (P_FA) or acceptances under the alternative (P_MD).
 */
template <MixtureModel M>
ErrorEstimate estimate_direct(const Detector& detector, const M& model, Hypothesis hyp,
                              const EstimationOptions& opts) {
  if (opts.trials == 0) {
    throw std::invalid_argument("estimate_direct: trials must be at least 1");
  }
  const ErrorKind error =
      hyp == Hypothesis::Null ? ErrorKind::FalseAlarm : ErrorKind::MissDetection;
  const StreamId stream = stream_for(error, opts.purpose);
  const auto n = static_cast<std::size_t>(model.n());

  const auto values = run_trials(
      opts.first_trial, opts.trials, opts.threads, [&](std::uint64_t trial, std::vector<double>& x) {
        x.resize(n);
        TrialStreams streams(opts.seed, trial, stream);
        model.sample(hyp, streams, x);
        const Decision d = detector.evaluate(model, std::span<const double>(x)).decision;
        const bool wrong = hyp == Hypothesis::Null ? d == Decision::RejectNull
                                                   : d == Decision::AcceptNull;
        return wrong ? 1.0 : 0.0;
      });

  double sum = 0.0;
  for (const double v : values) {
    sum += v;
  }
  return summarize(EstimatorKind::DirectMC, error, opts.trials, opts.seed, opts.first_trial, stream,
                   sum, sum);
}

/*
 * Importance sampling through the opposite hypothesis.
 *
 * P_FA = E_1[e^{-LLR} 1{LLR >= t}] is estimated from draws under H1 and
 * P_MD = E_0[e^{LLR} 1{LLR < t}] from draws under H0, where t is the
 * detector threshold. The estimator is the plain (unnormalized) weighted mean.
 */
template <MixtureModel M>
ErrorEstimate estimate_importance(const Detector& detector, const M& model, ErrorKind target,
                                  const EstimationOptions& opts) {
  if (!detector.exposes_llr()) {
    throw std::invalid_argument("estimate_importance: detector '" + to_string(detector.kind) +
                                "' has no likelihood ratio to weight by");
  }
  if (opts.trials < 2) {
    throw std::invalid_argument("estimate_importance: need at least 2 trials");
  }
  const StreamId stream = stream_for(target, opts.purpose);
  const Hypothesis draw_from =
      target == ErrorKind::FalseAlarm ? Hypothesis::Alternative : Hypothesis::Null;
  const auto n = static_cast<std::size_t>(model.n());
  const double threshold = detector.threshold;

  const auto weights = run_trials(
      opts.first_trial, opts.trials, opts.threads, [&](std::uint64_t trial, std::vector<double>& x) {
        x.resize(n);
        TrialStreams streams(opts.seed, trial, stream);
        model.sample(draw_from, streams, x);
        const double llr = model.llr(std::span<const double>(x));
        if (target == ErrorKind::FalseAlarm) {
          return llr >= threshold ? std::exp(-llr) : 0.0;
        }
        return llr < threshold ? std::exp(llr) : 0.0;
      });

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  return summarize(EstimatorKind::ImportanceSampled, target, opts.trials, opts.seed,
                   opts.first_trial, stream, sum, sum_sq);
}

// ---------------------------------------------------------------------------
// Threshold calibration

enum class CalibrationMethod { EmpiricalQuantile, AnalyticMaxTest };

struct CalibratedThreshold {
  double level = 0.05;
  double threshold = 0.0;
  CalibrationMethod method = CalibrationMethod::EmpiricalQuantile;
  std::uint64_t null_sims = 0;
  /// Fraction of the null statistics at or above the threshold.
  double achieved_fa = 0.0;
  /// Set when ties at the threshold push the achieved level above `level`.
  bool degenerate = false;
  std::uint64_t seed = 0;
  StreamId stream{StreamTarget::FalseAlarm, StreamPurpose::Calibration};
};

/// Smallest null_sims accepted for a given level.
std::uint64_t min_null_sims(double level);

/*
 * Empirical (1 - level) quantile of simulated null statistics.
 *
 * With m = floor(level * N) permitted exceedances the threshold is the
 * (N - m + 1)-th order statistic, so that (ties aside) exactly m of the N
 * statistics reach it while the next-lower order statistic is exceeded by
 * m + 1 > level * N.
 */
CalibratedThreshold calibrate_from_null_statistics(std::vector<double> statistics, double level);

/// Analytic max-test threshold, inverting 1 - Phi(tau)^n = level.
CalibratedThreshold calibrate_max_analytic(std::uint64_t n, double level);

/// Statistic values for trials [first_trial, first_trial + count) under `hyp`
/// on the given stream family.
template <MixtureModel M>
std::vector<double> simulate_statistics(const Detector& detector, const M& model, Hypothesis hyp,
                                        std::uint64_t count, StreamId stream,
                                        const EstimationOptions& opts) {
  const auto n = static_cast<std::size_t>(model.n());
  return run_trials(opts.first_trial, count, opts.threads,
                    [&](std::uint64_t trial, std::vector<double>& x) {
                      x.resize(n);
                      TrialStreams streams(opts.seed, trial, stream);
                      model.sample(hyp, streams, x);
                      return detector.statistic(model, std::span<const double>(x));
                    });
}

/// Direct Monte Carlo estimate from statistics already simulated under `hyp`
/// with the given options and stream.
ErrorEstimate direct_from_statistics(std::span<const double> statistics, double threshold,
                                     Hypothesis hyp, const EstimationOptions& opts,
                                     StreamId stream);

/// Simulates `detector`'s statistic null_sims times under H0 on the
/// calibration stream and returns its empirical quantile. opts.trials is
/// ignored; opts.purpose is forced to Calibration.
template <MixtureModel M>
CalibratedThreshold calibrate_threshold(const Detector& detector, const M& model, double level,
                                        std::uint64_t null_sims, const EstimationOptions& opts) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("calibrate_threshold: level must lie in (0, 1)");
  }
  if (null_sims < min_null_sims(level)) {
    throw std::invalid_argument("calibrate_threshold: need at least " +
                                std::to_string(min_null_sims(level)) + " null simulations for level " +
                                std::to_string(level));
  }
  const StreamId stream{StreamTarget::FalseAlarm, StreamPurpose::Calibration};
  auto stats = simulate_statistics(detector, model, Hypothesis::Null, null_sims, stream, opts);
  auto result = calibrate_from_null_statistics(std::move(stats), level);
  result.seed = opts.seed;
  result.stream = stream;
  return result;
}

}  // namespace sparsemix

#endif  // SPARSEMIX_ESTIMATION_HPP_
