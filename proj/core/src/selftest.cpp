#include "sparsemix/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "sparsemix/detectors.hpp"
#include "sparsemix/estimation.hpp"
#include "sparsemix/oracles.hpp"
#include "sparsemix/random.hpp"
#include "sparsemix/regimes.hpp"
#include "sparsemix/special_functions.hpp"

namespace sparsemix {

namespace {

std::string fmt(const char* format, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

bool close_rel(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::abs(want);
}

CheckResult known_value(const std::string& name, double got, double want, double rel) {
  return {name, close_rel(got, want, rel), fmt("got %.17g, want %.17g", got, want)};
}

}  // namespace

std::vector<CheckResult> run_selftest(unsigned threads) {
  std::vector<CheckResult> out;

  out.push_back(known_value("normal_quantile(0.975)", normal_quantile(0.975), 1.9599639845400542, 1e-14));
  out.push_back(known_value("normal_sf(10)", normal_sf(10.0), 7.6198530241605261e-24, 1e-13));
  out.push_back(known_value("normal_sf(30)", normal_sf(30.0), 4.9067139271481871e-198, 1e-12));

  {
    const auto block = philox4x32_10({0, 0, 0, 0}, {0, 0});
    const bool ok = block == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c,
                                                           0x9b00dbd8};
    out.push_back({"philox known answer", ok, ok ? "" : "block mismatch"});
  }

  {
    const GaussianModel m(2, 0.1, 2.0);
    const double x[] = {3.0, -1.0};
    out.push_back(known_value("mixture llr", m.llr(x), 1.7466717767777941, 1e-14));
  }

  {
    const double tau = max_test_threshold_for_level(1000, 0.05);
    const auto e = max_test_error_probs(1000, std::pow(1000.0, -0.6), std::sqrt(2 * 0.66 * std::log(1000.0)), tau);
    out.push_back({"max test round trip", std::abs(e.p_fa - 0.05) <= 1e-10, fmt("p_fa %.17g, target %.17g", e.p_fa, 0.05)});
    out.push_back(known_value("max test miss probability", e.p_md, 0.044003296369425557, 1e-9));
  }

  {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    bool ok = true;
    for (int rep = 0; rep < 200 && ok; ++rep) {
      std::vector<double> x(1 + rep % 40);
      for (double& v : x) {
        v = z(gen);
      }
      ok = hc_statistic(x) == oracle::hc_bruteforce(x) && acw_statistic(x) == oracle::acw_bruteforce(x) &&
           max_statistic(x) == oracle::max_linear_scan(x);
    }
    out.push_back({"statistics vs brute force", ok, ok ? "200 instances" : "mismatch"});
  }

  {
    const DiscreteMixtureModel toy(1, 0.3, 1.5);
    const auto report = oracle::check_lrt_optimality(toy);
    out.push_back({"likelihood ratio optimality (n = 1)", report.lrt_optimal(),
                   std::to_string(report.suboptimal_tuples) + " suboptimal tuples"});
  }

  {
    const DiscreteMixtureModel toy(2, 0.2, 1.5, 21, -4.0, 4.0);
    const auto truth = oracle::enumerate_lrt_errors(toy, 0.0);
    EstimationOptions opts;
    opts.seed = 11;
    opts.trials = 20000;
    opts.threads = threads;
    const Detector lrt = Detector::oracle_lrt();
    const auto fa = estimate_importance(lrt, toy, ErrorKind::FalseAlarm, opts);
    const auto md = estimate_importance(lrt, toy, ErrorKind::MissDetection, opts);
    const bool ok = std::abs(fa.p_hat - truth.p_fa) <= 4 * fa.std_err &&
                    std::abs(md.p_hat - truth.p_md) <= 4 * md.std_err;
    out.push_back({"importance sampling vs enumeration", ok,
                   fmt("fa %.5g md %.5g", fa.p_hat - truth.p_fa, md.p_hat - truth.p_md)});
  }

  {
    const double left = 0.75 - 0.5;
    const double right = std::pow(1.0 - std::sqrt(0.25), 2.0);
    out.push_back({"critical r continuity", left == 0.25 && right == 0.25 && critical_r(0.75) == 0.25,
                   fmt("%.17g %.17g", left, right)});
  }

  {
    bool ok = true;
    for (double x = 0.1; x <= 30.0 + 1e-9 && ok; x += 0.1) {
      const auto b = q_bounds(x);
      const double q = normal_sf(x);
      ok = b.lower <= q && q <= b.upper;
    }
    out.push_back({"Q bounds bracket the tail", ok, ""});
  }

  return out;
}

}  // namespace sparsemix
