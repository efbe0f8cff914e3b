#include "sparsemix/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sparsemix/special_functions.hpp"

namespace sparsemix {

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Lrt:
      return "lrt";
    case TestKind::Max:
      return "max";
    case TestKind::Hc:
      return "hc";
    case TestKind::Acw:
      return "acw";
  }
  return "unknown";
}

TestKind parse_test_kind(const std::string& name) {
  if (name == "lrt") return TestKind::Lrt;
  if (name == "max") return TestKind::Max;
  if (name == "hc") return TestKind::Hc;
  if (name == "acw") return TestKind::Acw;
  throw std::invalid_argument("unknown test '" + name + "' (expected lrt, max, hc or acw)");
}

HcConfig HcConfig::restricted_to(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw std::invalid_argument("HcConfig: need 0 <= lo < hi <= 1");
  }
  return {true, lo, hi};
}

double max_statistic(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("max_statistic: empty sample");
  }
  return *std::max_element(samples.begin(), samples.end());
}

double hc_statistic_from_pvalues(std::span<const double> pvalues, HcConfig config) {
  if (pvalues.empty()) {
    throw std::invalid_argument("hc_statistic: empty sample");
  }
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  const double nd = static_cast<double>(n);
  std::size_t first = 1;
  std::size_t last = n;
  if (config.restricted) {
    first = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.lo_fraction * nd)));
    last = static_cast<std::size_t>(std::floor(config.hi_fraction * nd));
  }

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i <= last; ++i) {
    const double p = sorted[i - 1];
    if (p <= 0.0 || p >= 1.0) {
      continue;
    }
    const double id = static_cast<double>(i);
    const double term = std::sqrt(nd) * (id / nd - p) / std::sqrt(p * (1.0 - p));
    best = std::max(best, term);
  }
  return best;
}

double hc_statistic(std::span<const double> samples, HcConfig config) {
  if (samples.empty()) {
    throw std::invalid_argument("hc_statistic: empty sample");
  }
  std::vector<double> pvalues(samples.size());
  std::transform(samples.begin(), samples.end(), pvalues.begin(),
                 [](double x) { return normal_sf(x); });
  return hc_statistic_from_pvalues(pvalues, config);
}

double acw_statistic(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("acw_statistic: empty sample");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(samples[a]) > std::abs(samples[b]);
  });

  long long sign_sum = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const double x = samples[order[k - 1]];
    sign_sum += (x > 0.0) - (x < 0.0);
    best = std::max(best, static_cast<double>(sign_sum) / std::sqrt(static_cast<double>(k)));
  }
  return best;
}

double max_test_default_threshold(std::uint64_t n) {
  return std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

MaxTestErrors max_test_error_probs(std::uint64_t n, double eps, double mu, double tau) {
  if (n == 0) {
    throw std::invalid_argument("max_test_error_probs: n must be at least 1");
  }
  if (!(eps >= 0.0 && eps <= 1.0) || !std::isfinite(tau) || !std::isfinite(mu)) {
    throw std::invalid_argument("max_test_error_probs: need eps in [0,1] and finite tau, mu");
  }
  const double nd = static_cast<double>(n);
  const double p_fa = -std::expm1(nd * normal_log_cdf(tau));

  // Per-sample cdf of the alternative at tau, 1 - s with s its upper tail.
  const double s = (1.0 - eps) * normal_sf(tau) + eps * normal_sf(tau - mu);
  double log_cdf = 0.0;
  if (eps == 0.0) {
    log_cdf = normal_log_cdf(tau);
  } else if (s < 0.5) {
    log_cdf = std::log1p(-s);
  } else {
    const double log_null = std::log1p(-eps) + normal_log_cdf(tau);
    const double log_signal = std::log(eps) + normal_log_cdf(tau - mu);
    const double hi = std::max(log_null, log_signal);
    log_cdf = hi + std::log1p(std::exp(std::min(log_null, log_signal) - hi));
  }
  return {p_fa, std::exp(nd * log_cdf)};
}

double max_test_threshold_for_level(std::uint64_t n, double level) {
  if (n == 0 || !(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("max_test_threshold_for_level: need n >= 1, level in (0,1)");
  }
  // Per-sample exceedance 1 - (1 - level)^{1/n}, kept accurate for large n.
  const double q = -std::expm1(std::log1p(-level) / static_cast<double>(n));
  return normal_isf(q);
}

}  // namespace sparsemix
