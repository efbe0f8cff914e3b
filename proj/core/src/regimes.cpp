#include "sparsemix/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsemix/special_functions.hpp"

namespace sparsemix {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Undetectable:
      return "undetectable";
    case Regime::DenseWeak:
      return "dense_weak";
    case Regime::ModeratelySparseWeak:
      return "moderately_sparse_weak";
    case Regime::Moderate:
      return "moderate";
    case Regime::Strong:
      return "strong";
    case Regime::OnBoundary:
      return "on_boundary";
  }
  return "unknown";
}

std::string to_string(RateFunction f) {
  switch (f) {
    case RateFunction::None:
      return "none";
    case RateFunction::NEps2D2:
      return "n_eps2_d2";
    case RateFunction::NEps:
      return "n_eps";
    case RateFunction::MuSq:
      return "mu_sq";
    case RateFunction::ModerateG:
      return "moderate_g";
  }
  return "unknown";
}

std::string to_string(ConstantKind k) {
  switch (k) {
    case ConstantKind::None:
      return "none";
    case ConstantKind::Exact:
      return "exact";
    case ConstantKind::UpperBound:
      return "upper_bound";
    case ConstantKind::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

std::string to_string(Scaling s) { return s == Scaling::SparseR ? "sparse_r" : "dense_power"; }

double critical_r(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) {
    throw std::domain_error("critical_r: beta must lie in (1/2, 1)");
  }
  if (beta < 0.75) {
    return beta - 0.5;
  }
  const double root = 1.0 - std::sqrt(1.0 - beta);
  return root * root;
}

BoundaryPoint boundary_point(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::domain_error("boundary_point: beta must lie in (0, 1)");
  }
  if (beta <= 0.5) {
    return {BoundaryPoint::Kind::DensePowerCrit, beta, beta - 0.5};
  }
  return {BoundaryPoint::Kind::SqrtLog, beta, critical_r(beta)};
}

namespace {

constexpr double kWeakConstant = -0.125;
constexpr double kStrongConstant = -1.0;
constexpr double kModerateConstant = -0.0625;

RegimeClass make(Regime regime, double beta, double r, Scaling scaling) {
  RegimeClass c;
  c.regime = regime;
  c.beta = beta;
  c.r = r;
  c.scaling = scaling;
  switch (regime) {
    case Regime::DenseWeak:
    case Regime::ModeratelySparseWeak:
      c.fa = {RateFunction::NEps2D2, kWeakConstant, ConstantKind::Exact};
      c.md = c.fa;
      break;
    case Regime::Moderate:
      c.fa = {RateFunction::ModerateG, kModerateConstant, ConstantKind::UpperBound};
      c.md = c.fa;
      break;
    case Regime::Strong:
      c.md = {RateFunction::NEps, kStrongConstant, ConstantKind::Exact};
      // Default: n eps / mu^2 -> infinity. Dense power laws may override.
      c.fa = {RateFunction::NEps, kStrongConstant, ConstantKind::UpperBound};
      break;
    case Regime::Undetectable:
    case Regime::OnBoundary:
      break;
  }
  return c;
}

RegimeClass classify_sparse(double beta, double r) {
  const auto S = Scaling::SparseR;
  if (beta > 0.5) {
    const double rc = critical_r(beta);
    if (r < rc) {
      return make(Regime::Undetectable, beta, r, S);
    }
    if (r == rc) {
      return make(Regime::OnBoundary, beta, r, S);
    }
    if (beta < 0.75) {
      if (r < beta / 3.0) {
        return make(Regime::ModeratelySparseWeak, beta, r, S);
      }
      if (r == beta / 3.0) {
        return make(Regime::OnBoundary, beta, r, S);
      }
    }
  } else {
    // Every sqrt-log shift is above the dense boundary n^{beta - 1/2}.
    if (r < beta / 3.0) {
      if (beta == 0.5) {
        auto c = make(Regime::OnBoundary, beta, r, S);
        c.note = "beta = 1/2 separates the dense and moderately sparse weak-signal results";
        return c;
      }
      return make(Regime::DenseWeak, beta, r, S);
    }
    if (r == beta / 3.0) {
      return make(Regime::OnBoundary, beta, r, S);
    }
  }
  if (r < beta) {
    return make(Regime::Moderate, beta, r, S);
  }
  if (r == beta) {
    return make(Regime::OnBoundary, beta, r, S);
  }
  return make(Regime::Strong, beta, r, S);
}

RegimeClass classify_dense(double beta, double r) {
  const auto S = Scaling::DensePower;
  if (beta < 0.5) {
    const double crit = beta - 0.5;
    if (r < crit) {
      return make(Regime::Undetectable, beta, r, S);
    }
    if (r == crit) {
      return make(Regime::OnBoundary, beta, r, S);
    }
    if (r <= 0.0) {
      // mu_n bounded, so mu_n / sqrt((2/3) beta log n) -> 0: the weak-signal cap holds.
      return make(Regime::DenseWeak, beta, r, S);
    }
  } else if (r < 0.0 || (r == 0.0 && beta > 0.5)) {
    // Bounded mu_n is below any sqrt-log boundary.
    return make(Regime::Undetectable, beta, r, S);
  } else if (r == 0.0) {
    return make(Regime::OnBoundary, beta, r, S);
  }

  // mu_n = n^r with r > 0 outgrows sqrt(2 beta log n).
  auto c = make(Regime::Strong, beta, r, S);
  const double order = 1.0 - beta - 2.0 * r;  // n eps / mu^2 = n^order
  if (order < 0.0) {
    c.fa = {RateFunction::MuSq, kWeakConstant, ConstantKind::UpperBound};
  } else if (order == 0.0) {
    c.fa = {RateFunction::None, 0.0, ConstantKind::Indeterminate};
    c.note = "n eps / mu^2 is constant; false-alarm rate not characterized";
  }
  return c;
}

}  // namespace

RegimeClass classify(double beta, double r, Scaling scaling) {
  if (!(beta > 0.0 && beta < 1.0) || !std::isfinite(r)) {
    throw std::invalid_argument("classify: need beta in (0, 1) and finite r");
  }
  if (scaling == Scaling::SparseR) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("classify: sparse scaling needs r > 0");
    }
    return classify_sparse(beta, r);
  }
  return classify_dense(beta, r);
}

RegimeClass classify(const ModelParams& params) {
  params.validate();
  if (const auto* s = std::get_if<SparseR>(&params.signal)) {
    return classify(params.beta, s->r, Scaling::SparseR);
  }
  if (const auto* d = std::get_if<DensePower>(&params.signal)) {
    return classify(params.beta, d->r, Scaling::DensePower);
  }
  const auto& table = std::get<ExplicitMu>(params.signal).table;
  const bool constant = std::all_of(table.begin(), table.end(),
                                    [&](const auto& e) { return e.second == table.front().second; });
  double r = 0.0;
  if (!constant) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    double k = 0.0;
    for (const auto& [n, mu] : table) {
      if (n < 2 || mu <= 0.0) {
        continue;
      }
      const double x = std::log(static_cast<double>(n));
      const double y = std::log(mu);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      k += 1.0;
    }
    if (k < 2.0 || k * sxx - sx * sx <= 0.0) {
      throw std::invalid_argument("classify: explicit mu table too small to fit a power law");
    }
    r = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  auto c = classify(params.beta, r, Scaling::DensePower);
  c.note = "explicit mu table treated as mu ~ n^" + std::to_string(r);
  return c;
}

double log_rate_g(RateFunction fn, const RateArgs& a) {
  const double mu2 = a.mu * a.mu;
  switch (fn) {
    case RateFunction::NEps2D2: {
      const double log_chi2 = mu2 > 30.0 ? mu2 + std::log1p(-std::exp(-mu2)) : std::log(std::expm1(mu2));
      return a.log_n + 2.0 * a.log_eps + log_chi2;
    }
    case RateFunction::NEps:
      return a.log_n + a.log_eps;
    case RateFunction::MuSq:
      return 2.0 * std::log(a.mu);
    case RateFunction::ModerateG: {
      if (!(a.r > 0.0)) {
        throw std::invalid_argument("log_rate_g: moderate rate needs r > 0");
      }
      const double arg = (a.beta / (2.0 * a.r) - 1.5) * a.mu;
      return a.log_n + 2.0 * a.log_eps + mu2 + normal_log_cdf(arg);
    }
    case RateFunction::None:
      break;
  }
  throw std::invalid_argument("rate_g: regime has no rate function");
}

double rate_g(RateFunction fn, const GaussianModel& model, double beta, double r) {
  const double nd = static_cast<double>(model.n());
  const double eps = model.eps();
  const double mu = model.mu();
  switch (fn) {
    case RateFunction::NEps2D2:
      return nd * eps * eps * std::expm1(mu * mu);
    case RateFunction::NEps:
      return nd * eps;
    case RateFunction::MuSq:
      return mu * mu;
    case RateFunction::ModerateG:
      return std::exp(log_rate_g(fn, {std::log(nd), std::log(eps), mu, beta, r}));
    case RateFunction::None:
      break;
  }
  throw std::invalid_argument("rate_g: regime has no rate function");
}

double rate_g(const RateSpec& spec, const GaussianModel& model, const RegimeClass& regime) {
  return rate_g(spec.fn, model, regime.beta, regime.r);
}

double universal_md_bound(std::uint64_t n, double eps) { return -(static_cast<double>(n) * eps); }

// ---------------------------------------------------------------------------

std::vector<double> default_gamma_grid() { return {0.3, 0.1, 0.03, 0.01}; }

namespace {

// +1 increasing, -1 decreasing, 0 neither.
int trend(std::span<const double> log_n, std::span<const double> values) {
  const double k = static_cast<double>(values.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sx += log_n[i];
    sy += values[i];
  }
  double sxy = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sxy += (log_n[i] - sx / k) * (values[i] - sy / k);
  }
  if (sxy < 0.0 && values.back() < values.front()) {
    return -1;
  }
  if (sxy > 0.0 && values.back() > values.front()) {
    return 1;
  }
  return 0;
}

}  // namespace

WeakConditionReport check_weak_conditions(const ModelParams& params,
                                          std::span<const std::uint64_t> n_grid,
                                          std::span<const double> gamma_grid) {
  params.validate();
  if (n_grid.size() < 2) {
    throw std::invalid_argument("check_weak_conditions: need at least two sample sizes");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw std::invalid_argument("check_weak_conditions: n grid must be increasing, n >= 2");
    }
  }
  if (gamma_grid.empty()) {
    throw std::invalid_argument("check_weak_conditions: empty gamma grid");
  }
  for (const double g : gamma_grid) {
    if (!(g > 0.0 && g < 1.0)) {
      throw std::invalid_argument("check_weak_conditions: gamma must lie in (0, 1)");
    }
  }

  WeakConditionReport report;
  std::vector<double> log_n;
  std::vector<double> eps2_chi2;
  std::vector<double> n_eps2_chi2;
  std::vector<std::vector<double>> tails(gamma_grid.size());
  for (const std::uint64_t n : n_grid) {
    const GaussianModel m = params.at(n);
    const double mu = m.mu();
    if (!(mu > 0.0)) {
      throw std::invalid_argument("check_weak_conditions: mu_n must be positive on the grid");
    }
    const double chi2 = m.chi2_divergence();
    const double e2 = m.eps() * m.eps() * chi2;
    log_n.push_back(std::log(static_cast<double>(n)));
    eps2_chi2.push_back(e2);
    n_eps2_chi2.push_back(static_cast<double>(n) * e2);
    for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
      const double shift = std::log1p(gamma_grid[g] / m.eps()) / mu;
      const double q_low = normal_sf(-1.5 * mu + shift);
      const double bracket =
          q_low - 2.0 * normal_sf(-0.5 * mu + shift) + normal_sf(0.5 * mu + shift);
      const double tail = q_low + bracket / chi2;
      tails[g].push_back(tail);
      report.rows.push_back({n, gamma_grid[g], tail, e2, static_cast<double>(n) * e2});
    }
  }
  report.tail_decreasing = std::all_of(tails.begin(), tails.end(),
                                       [&](const auto& t) { return trend(log_n, t) < 0; });
  report.eps2_chi2_decreasing = trend(log_n, eps2_chi2) < 0;
  report.n_eps2_chi2_increasing = trend(log_n, n_eps2_chi2) > 0;
  return report;
}

}  // namespace sparsemix
