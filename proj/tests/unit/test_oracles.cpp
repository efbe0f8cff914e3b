#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sparsemix/detectors.hpp"
#include "sparsemix/oracles.hpp"

using namespace sparsemix;
using oracle::Rational;

TEST_CASE("enumeration of every rejection set agrees with the pointwise minimum") {
  SUBCASE("n = 1 on 17 points") {
    const DiscreteMixtureModel m(1, 0.3, 1.5, 17, -4.0, 4.0);
    const auto t = oracle::enumerate_tuples(m);
    REQUIRE(t.p0.size() == 17);
    const auto report = oracle::check_lrt_optimality(m);
    CHECK(oracle::min_error_all_tests(t.p0, t.p1) == report.bayes_error);
    CHECK(report.lrt_optimal());
    CHECK(report.suboptimal_tuples == 0);
  }
  SUBCASE("n = 2 on 4 points") {
    const DiscreteMixtureModel m(2, 0.4, 1.0, 4, -1.5, 1.5);
    const auto t = oracle::enumerate_tuples(m);
    REQUIRE(t.p0.size() == 16);
    const auto report = oracle::check_lrt_optimality(m);
    CHECK(oracle::min_error_all_tests(t.p0, t.p1) == report.bayes_error);
    CHECK(report.lrt_optimal());
  }
}

TEST_CASE("exact tuple probabilities sum to one") {
  const DiscreteMixtureModel m(2, 0.2, 2.0, 11, -3.0, 3.0);
  const auto t = oracle::enumerate_tuples(m);
  Rational s0(0);
  Rational s1(0);
  for (std::size_t i = 0; i < t.p0.size(); ++i) {
    s0 += t.p0[i];
    s1 += t.p1[i];
  }
  // The double pmfs sum to 1 up to rounding; their exact rational sums do too.
  CHECK(std::abs(static_cast<double>(s0) - 1.0) < 1e-14);
  CHECK(std::abs(static_cast<double>(s1) - 1.0) < 1e-14);
}

TEST_CASE("a test that ignores the likelihood ratio is worse") {
  const DiscreteMixtureModel m(1, 0.5, 2.0, 9, -4.0, 4.0);
  const auto t = oracle::enumerate_tuples(m);
  Rational reject_right(0);
  for (std::size_t i = 0; i < t.p0.size(); ++i) {
    reject_right += m.grid()[i] >= 3.0 ? t.p0[i] : t.p1[i];
  }
  CHECK(reject_right / 2 > oracle::check_lrt_optimality(m).bayes_error);
}

TEST_CASE("enumerated error probabilities") {
  const DiscreteMixtureModel flat(2, 0.0, 1.0, 7, -3.0, 3.0);
  const auto e = oracle::enumerate_lrt_errors(flat, 0.0);
  CHECK(e.p_fa == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.p_md == 0.0);
  const DiscreteMixtureModel m(2, 0.3, 1.5);
  const auto strict = oracle::enumerate_lrt_errors(m, 0.5);
  const auto loose = oracle::enumerate_lrt_errors(m, -0.5);
  CHECK(strict.p_fa < loose.p_fa);
  CHECK(strict.p_md > loose.p_md);
  CHECK_THROWS(oracle::enumerate_lrt_errors(DiscreteMixtureModel(4, 0.3, 1.5, 5), 0.0));
}

TEST_CASE("brute-force statistics") {
  const std::vector<double> x{1.0, -2.0, 0.5, 3.0};
  CHECK(oracle::max_linear_scan(x) == 3.0);
  CHECK(oracle::acw_bruteforce(std::vector<double>{2.0, 1.0, 3.0}) == doctest::Approx(std::sqrt(3.0)));
  // Signs by magnitude: -, +, -, +: prefix sums -1, 0, -1, 0.
  CHECK(oracle::acw_bruteforce(std::vector<double>{-4.0, 3.0, -2.0, 1.0}) == 0.0);
  CHECK(oracle::hc_bruteforce(std::vector<double>{0.0}) == doctest::Approx(1.0));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  std::vector<double> y(40);
  for (double& v : y) {
    v = z(gen);
  }
  CHECK(oracle::hc_bruteforce(y) == hc_statistic(y));
  CHECK_THROWS(oracle::hc_bruteforce(std::vector<double>{}));
  CHECK_THROWS(oracle::min_error_all_tests(std::vector<Rational>(21), std::vector<Rational>(21)));
}
