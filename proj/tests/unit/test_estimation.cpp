#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sparsemix/estimation.hpp"
#include "sparsemix/oracles.hpp"
#include "sparsemix/special_functions.hpp"

using namespace sparsemix;

namespace {

EstimationOptions opts(std::uint64_t seed, std::uint64_t trials, unsigned threads = 1) {
  EstimationOptions o;
  o.seed = seed;
  o.trials = trials;
  o.threads = threads;
  return o;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("always-rejecting detector") {
  const GaussianModel m(5, 0.1, 1.0);
  const auto e = estimate_direct(Detector::max_test(-kInf), m, Hypothesis::Null, opts(1, 500));
  CHECK(e.p_hat == 1.0);
  CHECK(e.std_err == 0.0);
  CHECK(e.method == EstimatorKind::DirectMC);
  CHECK(e.error == ErrorKind::FalseAlarm);
  const auto md = estimate_direct(Detector::max_test(-kInf), m, Hypothesis::Alternative, opts(1, 500));
  CHECK(md.p_hat == 0.0);
  CHECK(md.is_zero());
  CHECK(md.resolution_floor() == 1.0 / 500);
}

TEST_CASE("direct standard error is binomial") {
  const GaussianModel m(20, 0.1, 1.5);
  const auto e = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Null, opts(2, 4000));
  CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 4000)).epsilon(1e-14));
}

TEST_CASE("results do not depend on the thread count") {
  const GaussianModel m(200, 0.05, 2.0);
  for (const auto hyp : {Hypothesis::Null, Hypothesis::Alternative}) {
    const auto a = estimate_direct(Detector::oracle_lrt(), m, hyp, opts(3, 3000, 1));
    const auto b = estimate_direct(Detector::oracle_lrt(), m, hyp, opts(3, 3000, 4));
    CHECK(a.sum == b.sum);
  }
  for (const auto err : {ErrorKind::FalseAlarm, ErrorKind::MissDetection}) {
    const auto a = estimate_importance(Detector::oracle_lrt(), m, err, opts(3, 3000, 1));
    const auto b = estimate_importance(Detector::oracle_lrt(), m, err, opts(3, 3000, 3));
    CHECK(a.sum == b.sum);
    CHECK(a.sum_sq == b.sum_sq);
    CHECK(a.p_hat == b.p_hat);
  }
}

TEST_CASE("split runs merge to the full run") {
  const GaussianModel m(50, 0.1, 2.0);
  auto half = opts(4, 1000);
  auto second = opts(4, 1000);
  second.first_trial = 1000;
  SUBCASE("direct") {
    const auto full = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Alternative, opts(4, 2000));
    const auto a = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Alternative, half);
    const auto b = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Alternative, second);
    const auto merged = merge(a, b);
    CHECK(merged.p_hat == full.p_hat);
    CHECK(merged.std_err == full.std_err);
    CHECK(merged.trials == 2000);
  }
  SUBCASE("importance") {
    const auto full = estimate_importance(Detector::oracle_lrt(), m, ErrorKind::MissDetection, opts(4, 2000));
    const auto a = estimate_importance(Detector::oracle_lrt(), m, ErrorKind::MissDetection, half);
    const auto b = estimate_importance(Detector::oracle_lrt(), m, ErrorKind::MissDetection, second);
    const auto merged = merge(a, b);
    CHECK(merged.p_hat == doctest::Approx(full.p_hat).epsilon(1e-13));
    CHECK(merged.std_err == doctest::Approx(full.std_err).epsilon(1e-10));
  }
  SUBCASE("mismatched pieces") {
    const auto a = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Alternative, half);
    CHECK_THROWS(merge(a, a));
    const auto c = estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Null, second);
    CHECK_THROWS(merge(a, c));
  }
}

TEST_CASE("importance sampling with identical hypotheses is direct sampling") {
  const GaussianModel m(30, 0.0, 2.0);
  for (const double t : {0.0, 0.5}) {
    const auto is = estimate_importance(Detector::oracle_lrt(t), m, ErrorKind::FalseAlarm, opts(5, 500));
    const auto mc = estimate_direct(Detector::oracle_lrt(t), m, Hypothesis::Null, opts(5, 500));
    CHECK(is.p_hat == mc.p_hat);
    const auto is_md = estimate_importance(Detector::oracle_lrt(t), m, ErrorKind::MissDetection, opts(5, 500));
    const auto mc_md = estimate_direct(Detector::oracle_lrt(t), m, Hypothesis::Alternative, opts(5, 500));
    CHECK(is_md.p_hat == mc_md.p_hat);
  }
}

TEST_CASE("importance weights integrate to one") {
  // With threshold -inf every trial keeps its weight e^{-LLR}, whose mean under
  // the alternative is 1.
  const GaussianModel m(100, 0.1, 1.5);
  const auto e = estimate_importance(Detector::oracle_lrt(-kInf), m, ErrorKind::FalseAlarm, opts(6, 20000));
  CHECK(std::abs(e.p_hat - 1.0) <= 3 * e.std_err);
  const auto md = estimate_importance(Detector::oracle_lrt(kInf), m, ErrorKind::MissDetection, opts(6, 20000));
  CHECK(std::abs(md.p_hat - 1.0) <= 3 * md.std_err);
}

TEST_CASE("importance sampling needs a likelihood ratio") {
  const GaussianModel m(10, 0.1, 1.0);
  CHECK_THROWS_AS(estimate_importance(Detector::max_test(2.0), m, ErrorKind::FalseAlarm, opts(1, 100)),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_importance(Detector::oracle_lrt(), m, ErrorKind::FalseAlarm, opts(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_direct(Detector::oracle_lrt(), m, Hypothesis::Null, opts(1, 0)),
                  std::invalid_argument);
}

TEST_CASE("estimators are unbiased on the discretized model") {
  const DiscreteMixtureModel toy(2, 0.3, 1.5);
  const auto truth = oracle::enumerate_lrt_errors(toy, 0.0);
  // Averages over 40 seeds; the combined standard error is the root-sum of squares / 40.
  double is_fa = 0, is_fa_var = 0, is_md = 0, is_md_var = 0;
  double mc_fa = 0, mc_fa_var = 0, mc_md = 0, mc_md_var = 0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const auto o = opts(100 + s, 2000);
    const auto a = estimate_importance(Detector::oracle_lrt(), toy, ErrorKind::FalseAlarm, o);
    const auto b = estimate_importance(Detector::oracle_lrt(), toy, ErrorKind::MissDetection, o);
    const auto c = estimate_direct(Detector::oracle_lrt(), toy, Hypothesis::Null, o);
    const auto d = estimate_direct(Detector::oracle_lrt(), toy, Hypothesis::Alternative, o);
    is_fa += a.p_hat, is_fa_var += a.std_err * a.std_err;
    is_md += b.p_hat, is_md_var += b.std_err * b.std_err;
    mc_fa += c.p_hat, mc_fa_var += c.std_err * c.std_err;
    mc_md += d.p_hat, mc_md_var += d.std_err * d.std_err;
  }
  auto within = [&](double sum, double var, double want) {
    return std::abs(sum / seeds - want) <= 4 * std::sqrt(var) / seeds;
  };
  CHECK(within(is_fa, is_fa_var, truth.p_fa));
  CHECK(within(is_md, is_md_var, truth.p_md));
  CHECK(within(mc_fa, mc_fa_var, truth.p_fa));
  CHECK(within(mc_md, mc_md_var, truth.p_md));
}

TEST_CASE("direct max test agrees with the analytic error probabilities") {
  const GaussianModel m(100, 0.1, 2.0);
  const auto exact = max_test_error_probs(100, 0.1, 2.0, 2.0);
  const auto fa = estimate_direct(Detector::max_test(2.0), m, Hypothesis::Null, opts(7, 20000));
  const auto md = estimate_direct(Detector::max_test(2.0), m, Hypothesis::Alternative, opts(7, 20000));
  CHECK(std::abs(fa.p_hat - exact.p_fa) <= 3 * fa.std_err);
  CHECK(std::abs(md.p_hat - exact.p_md) <= 3 * md.std_err);
}

TEST_CASE("empirical quantile calibration") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> z;
  for (const double level : {0.01, 0.05, 0.1, 0.37}) {
    for (const std::size_t total : {std::size_t{1000}, std::size_t{1234}, std::size_t{5000}}) {
      std::vector<double> s(total);
      for (double& v : s) {
        v = z(gen);
      }
      const auto c = calibrate_from_null_statistics(s, level);
      std::sort(s.begin(), s.end());
      const auto at = [&](double t) {
        return static_cast<double>(std::count_if(s.begin(), s.end(), [t](double v) { return v >= t; })) /
               static_cast<double>(total);
      };
      CHECK(c.method == CalibrationMethod::EmpiricalQuantile);
      CHECK(!c.degenerate);
      CHECK(c.achieved_fa == at(c.threshold));
      CHECK(c.achieved_fa <= level);
      const auto below = std::prev(std::lower_bound(s.begin(), s.end(), c.threshold));
      CHECK(at(*below) > level);
    }
  }
  CHECK(calibrate_from_null_statistics(std::vector<double>(20, 0.0), 0.5).threshold == 0.0);
}

TEST_CASE("constant statistic is flagged degenerate") {
  const auto c = calibrate_from_null_statistics(std::vector<double>(1000, 3.0), 0.05);
  CHECK(c.threshold == 3.0);
  CHECK(c.achieved_fa == 1.0);
  CHECK(c.degenerate);
}

TEST_CASE("calibration budget") {
  CHECK(min_null_sims(0.05) == 200);
  CHECK(min_null_sims(0.1) == 100);
  CHECK(min_null_sims(0.03) == 334);
  CHECK_THROWS(calibrate_from_null_statistics(std::vector<double>(199, 0.0), 0.05));
  const GaussianModel m(10, 0.1, 1.0);
  CHECK_THROWS(calibrate_threshold(Detector::max_test(0.0), m, 0.05, 100, opts(1, 1)));
  CHECK_THROWS(calibrate_threshold(Detector::max_test(0.0), m, 1.0, 1000, opts(1, 1)));
}

TEST_CASE("analytic max-test thresholds") {
  const auto c = calibrate_max_analytic(10, 0.05);
  CHECK(c.method == CalibrationMethod::AnalyticMaxTest);
  CHECK(c.threshold == doctest::Approx(normal_quantile(std::pow(0.95, 0.1))).epsilon(1e-14));
  CHECK(c.threshold == doctest::Approx(2.5678753685925715).epsilon(1e-14));
  double prev = -kInf;
  for (std::uint64_t n = 1; n <= 10000000; n *= 3) {
    const double t = calibrate_max_analytic(n, 0.05).threshold;
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("calibrated max test matches the analytic threshold") {
  const GaussianModel m(100, 0.0, 0.0);
  const auto c = calibrate_threshold(Detector::max_test(0.0), m, 0.05, 40000, opts(9, 1));
  CHECK(c.stream.purpose == StreamPurpose::Calibration);
  // Quantile sd ~ sqrt(p(1-p)/N) / f(tau) with f the density of the maximum.
  CHECK(std::abs(c.threshold - calibrate_max_analytic(100, 0.05).threshold) < 0.03);
}

TEST_CASE("calibrated higher criticism holds its level on fresh draws") {
  const GaussianModel null_model(1000, 0.0, 0.0);
  const auto det = Detector::higher_criticism(0.0);
  const auto c = calibrate_threshold(det, null_model, 0.05, 100000, opts(10, 1));
  auto fresh = opts(11, 20000);
  const auto fa = estimate_direct(Detector::higher_criticism(c.threshold), null_model, Hypothesis::Null, fresh);
  CHECK(fa.p_hat >= 0.045);
  CHECK(fa.p_hat <= 0.055);
}

TEST_CASE("direct estimate from stored statistics") {
  const GaussianModel m(40, 0.1, 2.0);
  const auto o = opts(12, 3000);
  const auto stream = stream_for(ErrorKind::MissDetection, StreamPurpose::Evaluation);
  const auto stats = simulate_statistics(Detector::acw(0.0), m, Hypothesis::Alternative, 3000, stream, o);
  const auto from = direct_from_statistics(stats, 1.5, Hypothesis::Alternative, o, stream);
  const auto direct = estimate_direct(Detector::acw(1.5), m, Hypothesis::Alternative, o);
  CHECK(from.p_hat == direct.p_hat);
  CHECK(from.stream == direct.stream);
}
