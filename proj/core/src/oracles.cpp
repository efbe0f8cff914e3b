#include "sparsemix/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsemix/special_functions.hpp"

namespace sparsemix::oracle {

namespace {

Rational exact(double v) {
  // Doubles are dyadic rationals; frexp splits v = m * 2^e with integral m.
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto mantissa = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r(mantissa);
  if (e > 0) {
    r *= Rational(boost::multiprecision::cpp_int(1) << e);
  } else if (e < 0) {
    r /= Rational(boost::multiprecision::cpp_int(1) << -e);
  }
  return r;
}

}  // namespace

double hc_bruteforce(std::span<const double> samples, HcConfig config) {
  const std::size_t n = samples.size();
  if (n == 0) {
    throw std::invalid_argument("hc_bruteforce: empty sample");
  }
  std::vector<double> p(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = normal_sf(samples[j]);
  }
  const double nd = static_cast<double>(n);
  std::size_t first = 1;
  std::size_t last = n;
  if (config.restricted) {
    first = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.lo_fraction * nd)));
    last = static_cast<std::size_t>(std::floor(config.hi_fraction * nd));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i <= last; ++i) {
    // Element whose rank (ties broken by index) is i.
    double pi = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t rank = 1;
      for (std::size_t k = 0; k < n; ++k) {
        if (p[k] < p[j] || (p[k] == p[j] && k < j)) {
          ++rank;
        }
      }
      if (rank == i) {
        pi = p[j];
        break;
      }
    }
    if (pi <= 0.0 || pi >= 1.0) {
      continue;
    }
    const double term =
        std::sqrt(nd) * (static_cast<double>(i) / nd - pi) / std::sqrt(pi * (1.0 - pi));
    if (term > best) {
      best = term;
    }
  }
  return best;
}

double acw_bruteforce(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) {
    throw std::invalid_argument("acw_bruteforce: empty sample");
  }
  // rank[j]: position of j when ordered by |x| descending, ties by index.
  std::vector<std::size_t> rank(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ak = std::abs(samples[k]);
      const double aj = std::abs(samples[j]);
      if (ak > aj || (ak == aj && k < j)) {
        ++r;
      }
    }
    rank[j] = r;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n; ++k) {
    long long sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (rank[j] < k) {
        sum += (samples[j] > 0.0) - (samples[j] < 0.0);
      }
    }
    const double v = static_cast<double>(sum) / std::sqrt(static_cast<double>(k));
    if (v > best) {
      best = v;
    }
  }
  return best;
}

double max_linear_scan(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("max_linear_scan: empty sample");
  }
  double m = samples[0];
  for (const double x : samples) {
    if (x > m) {
      m = x;
    }
  }
  return m;
}

namespace {

template <class Visit>
void for_each_tuple(const DiscreteMixtureModel& model, Visit&& visit) {
  const std::size_t points = model.grid().size();
  const std::size_t n = model.n();
  if (n > 3) {
    throw std::invalid_argument("tuple enumeration is limited to n <= 3");
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = model.grid()[idx[i]];
    }
    visit(idx, std::span<const double>(x));
    std::size_t i = 0;
    while (i < n && ++idx[i] == points) {
      idx[i] = 0;
      ++i;
    }
    if (i == n) {
      return;
    }
  }
}

}  // namespace

ExactErrors enumerate_lrt_errors(const DiscreteMixtureModel& model, double threshold) {
  double fa = 0.0;
  double md = 0.0;
  for_each_tuple(model, [&](const std::vector<std::size_t>& idx, std::span<const double> x) {
    double p0 = 1.0;
    double p1 = 1.0;
    for (const std::size_t k : idx) {
      p0 *= model.null_pmf()[k];
      p1 *= model.alternative_pmf()[k];
    }
    if (decide(model.llr(x), threshold) == Decision::RejectNull) {
      fa += p0;
    } else {
      md += p1;
    }
  });
  return {fa, md};
}

TupleTable enumerate_tuples(const DiscreteMixtureModel& model) {
  std::vector<Rational> q0;
  std::vector<Rational> q1;
  for (std::size_t k = 0; k < model.grid().size(); ++k) {
    q0.push_back(exact(model.null_pmf()[k]));
    q1.push_back(exact(model.alternative_pmf()[k]));
  }
  TupleTable t;
  for_each_tuple(model, [&](const std::vector<std::size_t>& idx, std::span<const double> x) {
    Rational p0(1);
    Rational p1(1);
    for (const std::size_t k : idx) {
      p0 *= q0[k];
      p1 *= q1[k];
    }
    t.p0.push_back(std::move(p0));
    t.p1.push_back(std::move(p1));
    t.llr.push_back(model.llr(x));
  });
  return t;
}

OptimalityReport check_lrt_optimality(const DiscreteMixtureModel& model) {
  const TupleTable t = enumerate_tuples(model);
  OptimalityReport report;
  report.tuples = t.p0.size();
  Rational lrt(0);
  Rational best(0);
  for (std::size_t i = 0; i < t.p0.size(); ++i) {
    const bool reject = decide(t.llr[i], 0.0) == Decision::RejectNull;
    lrt += reject ? t.p0[i] : t.p1[i];
    const bool reject_best = t.p1[i] >= t.p0[i];
    best += reject_best ? t.p0[i] : t.p1[i];
    if (reject != reject_best && t.p0[i] != t.p1[i]) {
      ++report.suboptimal_tuples;
    }
  }
  report.lrt_error = lrt / 2;
  report.bayes_error = best / 2;
  return report;
}

Rational min_error_all_tests(std::span<const Rational> p0, std::span<const Rational> p1) {
  const std::size_t m = p0.size();
  if (m != p1.size() || m > 20) {
    throw std::invalid_argument("min_error_all_tests: need matching sizes, at most 20 points");
  }
  Rational best(-1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Rational err(0);
    for (std::size_t i = 0; i < m; ++i) {
      err += (mask >> i) & 1U ? p0[i] : p1[i];
    }
    if (best < 0 || err < best) {
      best = err;
    }
  }
  return best / 2;
}

}  // namespace sparsemix::oracle
