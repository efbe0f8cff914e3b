#ifndef SPARSEMIX_ORACLES_HPP_
#define SPARSEMIX_ORACLES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sparsemix/detectors.hpp"
#include "sparsemix/model.hpp"

// Slow reference implementations used to check the production code.
namespace sparsemix::oracle {

using Rational = boost::multiprecision::cpp_rational;

/// Higher Criticism without sorting: the i-th order statistic is located by
/// counting ranks, O(n^2).
double hc_bruteforce(std::span<const double> samples, HcConfig config = {});

/// ACW statistic with each top-k sign sum recomputed from scratch, O(n^2).
double acw_bruteforce(std::span<const double> samples);

double max_linear_scan(std::span<const double> samples);

struct ExactErrors {
  double p_fa;
  double p_md;
};

/// Error probabilities of the likelihood ratio test with the given threshold
/// on a discretized model, by enumerating every n-tuple of grid points.
ExactErrors enumerate_lrt_errors(const DiscreteMixtureModel& model, double threshold);

/// Exact probabilities of every n-tuple under each hypothesis.
struct TupleTable {
  std::vector<Rational> p0;
  std::vector<Rational> p1;
  std::vector<double> llr;
};
TupleTable enumerate_tuples(const DiscreteMixtureModel& model);

struct OptimalityReport {
  Rational lrt_error;    ///< (P_FA + P_MD) / 2 of the threshold-0 LRT
  Rational bayes_error;  ///< minimum over all deterministic tests
  std::size_t tuples = 0;
  /// Tuples where the LRT decision differs from the pointwise minimizer.
  std::size_t suboptimal_tuples = 0;

  [[nodiscard]] bool lrt_optimal() const { return lrt_error == bayes_error; }
};

/*
 * Average error of the threshold-0 LRT against the best deterministic test.
 *
 * Every deterministic test is a rejection set A and its average error is
 * (sum_{x in A} p0(x) + sum_{x not in A} p1(x)) / 2, a sum of independent
 * per-tuple choices. Choosing min(p0, p1) at every tuple therefore attains the
 * minimum over all 2^(tuples) rejection sets. Arithmetic is exact on the
 * rational values of the model's double-precision pmfs.
 */
OptimalityReport check_lrt_optimality(const DiscreteMixtureModel& model);

/// Minimum average error over all 2^m rejection sets, by listing them.
/// Only for m <= 20.
Rational min_error_all_tests(std::span<const Rational> p0, std::span<const Rational> p1);

}  // namespace sparsemix::oracle

#endif  // SPARSEMIX_ORACLES_HPP_
