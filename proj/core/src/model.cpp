#include "sparsemix/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

namespace sparsemix {

namespace {

// Above log(eps L) = log(1e10) the eps L term dominates and is factored out.
constexpr double kLogLargeTerm = 23.025850929940457;
// expm1 overflows just above 709.78.
constexpr double kMaxExpArgument = 700.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": non-finite sample");
  }
}

}  // namespace

std::string to_string(Hypothesis h) { return h == Hypothesis::Null ? "null" : "alternative"; }

// ---------------------------------------------------------------------------
// ModelParams

void ModelParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("ModelParams: beta must lie in (0, 1)");
  }
  if (const auto* s = std::get_if<SparseR>(&signal)) {
    if (!(s->r > 0.0) || !std::isfinite(s->r)) {
      throw std::invalid_argument("ModelParams: sparse r must be positive");
    }
  } else if (const auto* d = std::get_if<DensePower>(&signal)) {
    if (!std::isfinite(d->r)) {
      throw std::invalid_argument("ModelParams: dense power r must be finite");
    }
  } else {
    const auto& table = std::get<ExplicitMu>(signal).table;
    if (table.empty()) {
      throw std::invalid_argument("ModelParams: explicit mu table is empty");
    }
    for (const auto& [n, mu] : table) {
      if (n == 0 || !(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("ModelParams: explicit mu table entries need n >= 1, mu >= 0");
      }
    }
  }
}

double ModelParams::eps_at(std::uint64_t n) const {
  if (n == 0) {
    throw std::invalid_argument("ModelParams: n must be at least 1");
  }
  return std::exp(-beta * std::log(static_cast<double>(n)));
}

double ModelParams::mu_at(std::uint64_t n) const {
  if (n == 0) {
    throw std::invalid_argument("ModelParams: n must be at least 1");
  }
  const double log_n = std::log(static_cast<double>(n));
  if (const auto* s = std::get_if<SparseR>(&signal)) {
    return std::sqrt(2.0 * s->r * log_n);
  }
  if (const auto* d = std::get_if<DensePower>(&signal)) {
    return std::exp(d->r * log_n);
  }
  const auto& table = std::get<ExplicitMu>(signal).table;
  const auto it = std::find_if(table.begin(), table.end(),
                               [n](const auto& entry) { return entry.first == n; });
  if (it == table.end()) {
    throw std::out_of_range("ModelParams: no explicit mu for n = " + std::to_string(n));
  }
  return it->second;
}

GaussianModel ModelParams::at(std::uint64_t n) const { return {n, eps_at(n), mu_at(n)}; }

// ---------------------------------------------------------------------------

double mixture_log_term(double log_lr, double eps, double log_eps, double log1m_eps) {
  if (eps == 0.0) {
    return 0.0;
  }
  const double log_signal = log_eps + log_lr;  // log(eps L)
  if (log_signal > kLogLargeTerm || log_lr > kMaxExpArgument) {
    return log_signal + std::log1p(std::exp(log1m_eps - log_signal));
  }
  // eps (L - 1). Away from 0, exp(a) - 1 has no cancellation and is cheaper.
  const double t = eps * (std::abs(log_lr) < 0.5 ? std::expm1(log_lr) : std::exp(log_lr) - 1.0);
  if (t >= -0.5) {
    return std::log1p(t);
  }
  // 1 - eps + eps L < 1/2: plain log-sum-exp keeps the small eps L term.
  const double hi = std::max(log1m_eps, log_signal);
  const double lo = std::min(log1m_eps, log_signal);
  return hi + std::log1p(std::exp(lo - hi));
}

// ---------------------------------------------------------------------------
// GaussianModel

GaussianModel::GaussianModel(std::uint64_t n, double eps, double mu)
    : n_(n), eps_(eps), mu_(mu), half_mu_sq_(0.5 * mu * mu),
      log_eps_(std::log(eps)), log1m_eps_(std::log1p(-eps)) {
  if (n == 0) {
    throw std::invalid_argument("GaussianModel: n must be at least 1");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("GaussianModel: eps must lie in [0, 1]");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("GaussianModel: mu must be finite and non-negative");
  }
}

double GaussianModel::log_likelihood_ratio(double x) const {
  require_finite(x, "log_likelihood_ratio");
  return mu_ * x - half_mu_sq_;
}

double GaussianModel::llr(std::span<const double> samples) const {
  if (samples.size() != n_) {
    throw std::invalid_argument("llr: expected " + std::to_string(n_) + " samples, got " +
                                std::to_string(samples.size()));
  }
  double sum = 0.0;
  for (const double x : samples) {
    require_finite(x, "llr");
    sum += llr_term(x);
  }
  return sum;
}

double GaussianModel::chi2_divergence() const { return std::expm1(mu_ * mu_); }

void GaussianModel::sample(Hypothesis hyp, TrialStreams& streams, std::span<double> out) const {
  boost::random::normal_distribution<double> normal;
  if (hyp == Hypothesis::Null) {
    for (double& x : out) {
      x = normal(streams.values);
    }
    return;
  }
  for (double& x : out) {
    x = normal(streams.values);
  }
  if (eps_ == 0.0) {
    return;
  }
  if (eps_ == 1.0) {
    for (double& x : out) {
      x += mu_;
    }
    return;
  }
  // Signal positions: gaps between consecutive labels are Geometric(eps),
  // drawn by inversion with one uniform per signal.
  const double log_keep = std::log1p(-eps_);
  const auto size = static_cast<double>(out.size());
  double pos = -1.0;
  for (;;) {
    const double u = 1.0 - streams.labels.uniform01();  // (0, 1]
    pos += 1.0 + std::floor(std::log(u) / log_keep);
    if (!(pos < size)) {
      break;
    }
    out[static_cast<std::size_t>(pos)] += mu_;
  }
}

std::vector<double> GaussianModel::sample(Hypothesis hyp, TrialStreams& streams,
                                          std::size_t count) const {
  std::vector<double> out(count);
  sample(hyp, streams, out);
  return out;
}

// ---------------------------------------------------------------------------
// DiscreteMixtureModel

DiscreteMixtureModel::DiscreteMixtureModel(std::uint64_t n, double eps, double mu,
                                           std::size_t points, double lo, double hi)
    : n_(n), eps_(eps), mu_(mu), lo_(lo) {
  if (n == 0 || points < 2 || !(hi > lo)) {
    throw std::invalid_argument("DiscreteMixtureModel: invalid size or grid");
  }
  if (!(eps >= 0.0 && eps <= 1.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("DiscreteMixtureModel: invalid eps or mu");
  }
  step_ = (hi - lo) / static_cast<double>(points - 1);
  grid_.resize(points);
  p0_.resize(points);
  p1_.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid_[k] = lo + step_ * static_cast<double>(k);
    p0_[k] = std::exp(-0.5 * grid_[k] * grid_[k]);
    p1_[k] = std::exp(-0.5 * (grid_[k] - mu) * (grid_[k] - mu));
  }
  const auto normalize = [](std::vector<double>& w) {
    double total = 0.0;
    for (const double v : w) {
      total += v;
    }
    for (double& v : w) {
      v /= total;
    }
  };
  normalize(p0_);
  normalize(p1_);

  const double log_eps = std::log(eps);
  const double log1m_eps = std::log1p(-eps);
  mix_.resize(points);
  term_.resize(points);
  cdf0_.resize(points);
  cdf1_.resize(points);
  double c0 = 0.0;
  double c1 = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    mix_[k] = (1.0 - eps) * p0_[k] + eps * p1_[k];
    term_[k] = mixture_log_term(std::log(p1_[k]) - std::log(p0_[k]), eps, log_eps, log1m_eps);
    c0 += p0_[k];
    c1 += p1_[k];
    cdf0_[k] = c0;
    cdf1_[k] = c1;
  }
}

std::size_t DiscreteMixtureModel::index_of(double x) const {
  const double pos = (x - lo_) / step_;
  const auto k = static_cast<long long>(std::llround(pos));
  if (k < 0 || static_cast<std::size_t>(k) >= grid_.size() ||
      std::abs(grid_[static_cast<std::size_t>(k)] - x) > 1e-9 * step_) {
    throw std::invalid_argument("DiscreteMixtureModel: sample is not a grid point");
  }
  return static_cast<std::size_t>(k);
}

double DiscreteMixtureModel::llr(std::span<const double> samples) const {
  if (samples.size() != n_) {
    throw std::invalid_argument("llr: sample count does not match model size");
  }
  double sum = 0.0;
  for (const double x : samples) {
    sum += llr_term(x);
  }
  return sum;
}

std::size_t DiscreteMixtureModel::draw(const std::vector<double>& cdf, double u) const {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

void DiscreteMixtureModel::sample(Hypothesis hyp, TrialStreams& streams,
                                  std::span<double> out) const {
  for (double& x : out) {
    const bool signal = hyp == Hypothesis::Alternative && streams.labels.uniform01() < eps_;
    const double u = streams.values.uniform01();
    x = grid_[draw(signal ? cdf1_ : cdf0_, u)];
  }
}

}  // namespace sparsemix
