#ifndef SPARSEMIX_DETECTORS_HPP_
#define SPARSEMIX_DETECTORS_HPP_

#include <cstdint>
#include <span>
#include <string>

#include "sparsemix/model.hpp"

namespace sparsemix {

enum class Decision { AcceptNull, RejectNull };

/// Every test rejects on equality with its threshold.
constexpr Decision decide(double statistic, double threshold) {
  return statistic >= threshold ? Decision::RejectNull : Decision::AcceptNull;
}

struct DetectorResult {
  double statistic;
  Decision decision;
  double threshold_used;
};

enum class TestKind { Lrt, Max, Hc, Acw };

std::string to_string(TestKind kind);
TestKind parse_test_kind(const std::string& name);

/// Index range over which Higher Criticism maximizes. Full is 1..n;
/// Restricted keeps ceil(lo n) <= i <= floor(hi n) (with i >= 1), e.g. the
/// common i <= n/2 variant.
struct HcConfig {
  bool restricted = false;
  double lo_fraction = 0.0;
  double hi_fraction = 1.0;

  static HcConfig full() { return {}; }
  static HcConfig restricted_to(double lo, double hi);
};

// ---------------------------------------------------------------------------
// Statistics

/// Oracle log-likelihood ratio statistic.
template <MixtureModel M>
double lrt_statistic(const M& model, std::span<const double> samples) {
  return model.llr(samples);
}

double max_statistic(std::span<const double> samples);

/// Higher Criticism on p_i = Q(X_i). Indices whose sorted p-value is exactly
/// 0 or 1 are skipped; returns -infinity if every index is skipped.
double hc_statistic(std::span<const double> samples, HcConfig config = {});

/// Higher Criticism from precomputed p-values (any order).
double hc_statistic_from_pvalues(std::span<const double> pvalues, HcConfig config = {});

/// Sign statistic: max over k of (sum of signs of the k largest |X|) / sqrt(k).
/// Ties in |X| keep sample order; zeros contribute sign 0.
double acw_statistic(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Max test analytics

struct MaxTestErrors {
  double p_fa;
  double p_md;
};

/// Default max-test threshold sqrt(2 log n).
double max_test_default_threshold(std::uint64_t n);

/// Exact false-alarm and miss probabilities of the max test from the cdf of
/// the sample maximum: 1 - Phi(tau)^n and ((1-eps) Phi(tau) + eps Phi(tau-mu))^n,
/// both evaluated in the log domain.
MaxTestErrors max_test_error_probs(std::uint64_t n, double eps, double mu, double tau);

/// Threshold whose exact false-alarm probability is `level` at sample size n.
double max_test_threshold_for_level(std::uint64_t n, double level);

// ---------------------------------------------------------------------------

/// A test statistic paired with its decision threshold.
struct Detector {
  TestKind kind = TestKind::Lrt;
  double threshold = 0.0;
  HcConfig hc{};

  static Detector oracle_lrt(double threshold = 0.0) { return {TestKind::Lrt, threshold, {}}; }
  static Detector max_test(double threshold) { return {TestKind::Max, threshold, {}}; }
  static Detector higher_criticism(double threshold, HcConfig config = {}) {
    return {TestKind::Hc, threshold, config};
  }
  static Detector acw(double threshold) { return {TestKind::Acw, threshold, {}}; }

  /// Only the likelihood ratio test carries the LLR needed for importance
  /// sampling weights.
  [[nodiscard]] bool exposes_llr() const { return kind == TestKind::Lrt; }

  template <MixtureModel M>
  [[nodiscard]] double statistic(const M& model, std::span<const double> samples) const {
    switch (kind) {
      case TestKind::Lrt:
        return lrt_statistic(model, samples);
      case TestKind::Max:
        return max_statistic(samples);
      case TestKind::Hc:
        return hc_statistic(samples, hc);
      case TestKind::Acw:
        return acw_statistic(samples);
    }
    return 0.0;
  }

  template <MixtureModel M>
  [[nodiscard]] DetectorResult evaluate(const M& model, std::span<const double> samples) const {
    const double stat = statistic(model, samples);
    return {stat, decide(stat, threshold), threshold};
  }
};

}  // namespace sparsemix

#endif  // SPARSEMIX_DETECTORS_HPP_
