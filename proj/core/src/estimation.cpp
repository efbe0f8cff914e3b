#include "sparsemix/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace sparsemix {

std::string to_string(ErrorKind kind) {
  return kind == ErrorKind::FalseAlarm ? "false_alarm" : "miss_detection";
}

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::DirectMC ? "direct" : "importance";
}

ErrorEstimate summarize(EstimatorKind method, ErrorKind error, std::uint64_t trials,
                        std::uint64_t seed, std::uint64_t first_trial, StreamId stream,
                        double sum, double sum_sq) {
  if (trials == 0) {
    throw std::invalid_argument("summarize: no trials");
  }
  const double t = static_cast<double>(trials);
  ErrorEstimate e;
  e.method = method;
  e.error = error;
  e.trials = trials;
  e.seed = seed;
  e.first_trial = first_trial;
  e.stream = stream;
  e.sum = sum;
  e.sum_sq = sum_sq;
  e.p_hat = sum / t;
  if (method == EstimatorKind::DirectMC) {
    e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / t);
  } else {
    const double var = trials > 1 ? std::max(0.0, (sum_sq - t * e.p_hat * e.p_hat) / (t - 1.0)) : 0.0;
    e.std_err = std::sqrt(var / t);
  }
  return e;
}

ErrorEstimate merge(const ErrorEstimate& first, const ErrorEstimate& second) {
  if (first.method != second.method || first.error != second.error || first.seed != second.seed ||
      !(first.stream == second.stream)) {
    throw std::invalid_argument("merge: estimates come from different estimators or streams");
  }
  if (second.first_trial != first.first_trial + first.trials) {
    throw std::invalid_argument("merge: trial ranges are not adjacent");
  }
  return summarize(first.method, first.error, first.trials + second.trials, first.seed,
                   first.first_trial, first.stream, first.sum + second.sum,
                   first.sum_sq + second.sum_sq);
}

ErrorEstimate direct_from_statistics(std::span<const double> statistics, double threshold,
                                     Hypothesis hyp, const EstimationOptions& opts,
                                     StreamId stream) {
  if (statistics.empty()) {
    throw std::invalid_argument("direct_from_statistics: no statistics");
  }
  double sum = 0.0;
  for (const double s : statistics) {
    const Decision d = decide(s, threshold);
    const bool wrong = hyp == Hypothesis::Null ? d == Decision::RejectNull
                                               : d == Decision::AcceptNull;
    sum += wrong ? 1.0 : 0.0;
  }
  const ErrorKind error =
      hyp == Hypothesis::Null ? ErrorKind::FalseAlarm : ErrorKind::MissDetection;
  return summarize(EstimatorKind::DirectMC, error, statistics.size(), opts.seed, opts.first_trial,
                   stream, sum, sum);
}

std::uint64_t min_null_sims(double level) {
  return static_cast<std::uint64_t>(std::ceil(10.0 / level - 1e-9));
}

CalibratedThreshold calibrate_from_null_statistics(std::vector<double> statistics, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("calibrate: level must lie in (0, 1)");
  }
  const std::size_t total = statistics.size();
  if (total < min_null_sims(level)) {
    throw std::invalid_argument("calibrate: insufficient null simulations for level");
  }
  std::sort(statistics.begin(), statistics.end());
  const auto allowed = static_cast<std::size_t>(
      std::floor(level * static_cast<double>(total) * (1.0 + 1e-12)));
  const double threshold = statistics[total - allowed];

  const auto first_at = std::lower_bound(statistics.begin(), statistics.end(), threshold);
  const auto exceed = static_cast<std::size_t>(statistics.end() - first_at);

  CalibratedThreshold c;
  c.level = level;
  c.threshold = threshold;
  c.method = CalibrationMethod::EmpiricalQuantile;
  c.null_sims = total;
  c.achieved_fa = static_cast<double>(exceed) / static_cast<double>(total);
  c.degenerate = exceed > allowed;
  return c;
}

CalibratedThreshold calibrate_max_analytic(std::uint64_t n, double level) {
  CalibratedThreshold c;
  c.level = level;
  c.threshold = max_test_threshold_for_level(n, level);
  c.method = CalibrationMethod::AnalyticMaxTest;
  c.null_sims = 0;
  c.achieved_fa = max_test_error_probs(n, 0.0, 0.0, c.threshold).p_fa;
  return c;
}

}  // namespace sparsemix
