#ifndef SPARSEMIX_MODEL_HPP_
#define SPARSEMIX_MODEL_HPP_

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sparsemix/random.hpp"

namespace sparsemix {

enum class Hypothesis { Null, Alternative };

std::string to_string(Hypothesis h);

// Signal-strength parameterizations.

/// mu_n = sqrt(2 r log n), the sparse detection-boundary scaling.
struct SparseR {
  double r = 0.0;
};

/// mu_n = n^r (r <= 0 in the dense regime; r = 0 gives a constant shift of 1).
struct DensePower {
  double r = 0.0;
};

/// mu_n given pointwise for the sample sizes of interest.
struct ExplicitMu {
  std::vector<std::pair<std::uint64_t, double>> table;
};

using SignalSpec = std::variant<SparseR, DensePower, ExplicitMu>;

class GaussianModel;

/*
 * Parameterization of a sequence of sparse mixture problems:
 *   H0: X_i ~ N(0, 1),   H1: X_i ~ (1 - eps_n) N(0, 1) + eps_n N(mu_n, 1),
 * with eps_n = n^{-beta} and mu_n given by the signal spec.
 */
struct ModelParams {
  double beta = 0.5;
  SignalSpec signal = SparseR{0.5};

  /// Throws std::invalid_argument if the parameters are outside their domain.
  void validate() const;

  [[nodiscard]] double eps_at(std::uint64_t n) const;
  [[nodiscard]] double mu_at(std::uint64_t n) const;
  [[nodiscard]] GaussianModel at(std::uint64_t n) const;
};

/// log(1 - eps + eps * exp(log_lr)) without overflow for large log_lr and
/// without cancellation when eps * (L - 1) is small.
double mixture_log_term(double log_lr, double eps, double log_eps, double log1m_eps);

/// Gaussian location mixture at a fixed sample size.
class GaussianModel {
 public:
  GaussianModel(std::uint64_t n, double eps, double mu);

  [[nodiscard]] std::uint64_t n() const { return n_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double mu() const { return mu_; }

  /// log L_n(x) = mu x - mu^2 / 2.
  [[nodiscard]] double log_likelihood_ratio(double x) const;

  /// log(1 - eps + eps L_n(x)), the per-sample summand of the LLR.
  [[nodiscard]] double llr_term(double x) const {
    return mixture_log_term(mu_ * x - half_mu_sq_, eps_, log_eps_, log1m_eps_);
  }

  /// Sum of llr_term over exactly n samples.
  [[nodiscard]] double llr(std::span<const double> samples) const;

  /// chi^2 divergence between N(mu, 1) and N(0, 1): e^{mu^2} - 1.
  [[nodiscard]] double chi2_divergence() const;

  /// Fills `out` with i.i.d. draws under `hyp`. The N(0,1) values come from
  /// the values stream under both hypotheses; under the alternative the
  /// Bernoulli(eps) labels come from the labels stream as geometric gaps and
  /// labelled values are shifted by mu.
  void sample(Hypothesis hyp, TrialStreams& streams, std::span<double> out) const;

  [[nodiscard]] std::vector<double> sample(Hypothesis hyp, TrialStreams& streams,
                                           std::size_t count) const;

 private:
  std::uint64_t n_;
  double eps_;
  double mu_;
  double half_mu_sq_;
  double log_eps_;
  double log1m_eps_;
};

/*
 * Discretized Gaussian location mixture on a uniform grid.
 *
 * Null pmf is proportional to phi(x_k), the signal component to
 * phi(x_k - mu); both renormalized over the grid. Small enough to enumerate
 * exactly for n <= 2, which makes it the reference model for checking
 * estimators and the optimality of the likelihood ratio test.
 */
class DiscreteMixtureModel {
 public:
  DiscreteMixtureModel(std::uint64_t n, double eps, double mu, std::size_t points = 41,
                       double lo = -5.0, double hi = 5.0);

  [[nodiscard]] std::uint64_t n() const { return n_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] const std::vector<double>& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& null_pmf() const { return p0_; }
  [[nodiscard]] const std::vector<double>& signal_pmf() const { return p1_; }
  /// Per-sample pmf under the alternative, (1 - eps) p0 + eps p1.
  [[nodiscard]] const std::vector<double>& alternative_pmf() const { return mix_; }

  /// Index of grid point x; throws if x is not on the grid.
  [[nodiscard]] std::size_t index_of(double x) const;

  [[nodiscard]] double llr_term(double x) const { return term_[index_of(x)]; }
  [[nodiscard]] double llr(std::span<const double> samples) const;

  void sample(Hypothesis hyp, TrialStreams& streams, std::span<double> out) const;

 private:
  [[nodiscard]] std::size_t draw(const std::vector<double>& cdf, double u) const;

  std::uint64_t n_;
  double eps_;
  double mu_;
  double lo_;
  double step_;
  std::vector<double> grid_;
  std::vector<double> p0_;
  std::vector<double> p1_;
  std::vector<double> mix_;
  std::vector<double> cdf0_;
  std::vector<double> cdf1_;
  std::vector<double> term_;
};

/// What estimators and the likelihood ratio detector need from a model.
template <class M>
concept MixtureModel = requires(const M& m, std::span<const double> xs, std::span<double> out,
                                TrialStreams& streams, Hypothesis h) {
  { m.n() } -> std::convertible_to<std::uint64_t>;
  { m.eps() } -> std::convertible_to<double>;
  { m.llr(xs) } -> std::convertible_to<double>;
  m.sample(h, streams, out);
};

}  // namespace sparsemix

#endif  // SPARSEMIX_MODEL_HPP_
