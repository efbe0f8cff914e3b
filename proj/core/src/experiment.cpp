#include "sparsemix/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sparsemix {

namespace {

constexpr double kCrossoverSigmas = 4.0;

EstimationOptions options(std::uint64_t seed, std::uint64_t trials, const RunOptions& run) {
  EstimationOptions o;
  o.seed = seed;
  o.trials = trials;
  o.threads = run.threads;
  return o;
}

GaussianModel model_at(const ExperimentConfig& c, std::uint64_t n) {
  try {
    return c.params.at(n);
  } catch (const std::out_of_range&) {
    throw ConfigError("mu table has no entry for n = " + std::to_string(n));
  }
}

void require_grid(const ExperimentConfig& c) {
  if (c.n_grid.empty()) {
    throw ConfigError("n_grid is required");
  }
}

nlohmann::json json_real(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  return format_real(v);
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, std::uint64_t n) { return mix_seed(master, n); }

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool agree_within(const ErrorEstimate& a, const ErrorEstimate& b, double k) {
  const double se = std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
  return std::abs(a.p_hat - b.p_hat) <= k * se;
}

// ---------------------------------------------------------------------------

bool RateExperimentResult::all_pass() const {
  if (!crossover.pass()) {
    return false;
  }
  return std::all_of(fits.begin(), fits.end(), [](const FitReport& f) {
    return f.spec.kind == ConstantKind::Indeterminate || (f.verdict && f.verdict->pass);
  });
}

std::string RateExperimentResult::csv() const {
  std::ostringstream out;
  out << "n,g,p_fa,se_fa,method_fa,p_md,se_md,method_md\n";
  for (const auto& row : rows) {
    out << row.n << ',' << format_real(row.g) << ',' << format_real(row.fa.p_hat) << ','
        << format_real(row.fa.std_err) << ',' << to_string(row.fa.method) << ','
        << format_real(row.md.p_hat) << ',' << format_real(row.md.std_err) << ','
        << to_string(row.md.method) << '\n';
  }
  return out.str();
}

std::string RateExperimentResult::fits_json() const {
  nlohmann::ordered_json j;
  j["regime"] = to_string(regime.regime);
  j["beta"] = regime.beta;
  j["r"] = regime.r;
  j["scaling"] = to_string(regime.scaling);
  j["seed"] = seed;
  if (!regime.note.empty()) {
    j["note"] = regime.note;
  }
  nlohmann::ordered_json fit_list = nlohmann::ordered_json::array();
  for (const auto& f : fits) {
    nlohmann::ordered_json e;
    e["error"] = to_string(f.error);
    e["rate_fn"] = to_string(f.spec.fn);
    e["constant"] = f.spec.constant;
    e["constant_kind"] = to_string(f.spec.kind);
    if (f.fit) {
      e["slope"] = f.fit->slope;
      e["intercept"] = f.fit->intercept;
      e["r2"] = f.fit->r_squared;
      e["slope_stderr"] = json_real(f.fit->slope_stderr);
      e["n_min"] = f.fit->n_min_used;
      e["points"] = f.fit->points;
    }
    if (f.verdict) {
      e["verdict"] = f.verdict->pass ? "PASS" : "FAIL";
      e["tolerance"] = f.verdict->tolerance;
      if (f.verdict->floor_checked) {
        e["floor"] = f.verdict->floor_ok ? "PASS" : "FAIL";
      }
      e["detail"] = f.verdict->detail;
    } else {
      e["verdict"] = f.spec.kind == ConstantKind::Indeterminate ? "N/A" : "FAIL";
      e["skipped"] = f.skipped;
    }
    nlohmann::ordered_json ex = nlohmann::ordered_json::array();
    for (const auto& x : f.excluded) {
      ex.push_back({{"n", x.n}, {"reason", x.reason}});
    }
    e["excluded"] = ex;
    fit_list.push_back(e);
  }
  j["fits"] = fit_list;
  if (crossover.ran) {
    j["crossover"] = {{"n", crossover.n},
                      {"direct_fa", crossover.direct_fa.p_hat},
                      {"direct_md", crossover.direct_md.p_hat},
                      {"fa_agrees", crossover.fa_agrees},
                      {"md_agrees", crossover.md_agrees}};
  }
  j["warnings"] = warnings;
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

RateExperimentResult run_rate_experiment(const ExperimentConfig& config, const RunOptions& run) {
  config.validate();
  require_grid(config);

  RateExperimentResult result;
  result.seed = config.seed;
  result.regime = classify(config.params);
  if (!result.regime.detectable()) {
    throw std::domain_error(
        "parameters classify as " + to_string(result.regime.regime) +
        ": at or below the detection boundary the summed error probabilities of every test "
        "tend to 1, so there is no decay rate to measure");
  }
  if (!config.oracle()) {
    result.warnings.push_back("fa_levels ignored: rate experiments use the oracle test");
  }

  const Detector lrt = Detector::oracle_lrt(0.0);
  const RateSpec& g_spec =
      result.regime.md.fn != RateFunction::None ? result.regime.md : result.regime.fa;

  RateSeries fa_series;
  RateSeries md_series;
  for (const std::uint64_t n : config.n_grid) {
    const GaussianModel model = model_at(config, n);
    const std::uint64_t seed = cell_seed(config.seed, n);
    RateRow row;
    row.n = n;
    row.g = rate_g(g_spec, model, result.regime);
    if (n < config.is_threshold_n) {
      const auto opts = options(seed, config.trials_direct, run);
      row.fa = estimate_direct(lrt, model, Hypothesis::Null, opts);
      row.md = estimate_direct(lrt, model, Hypothesis::Alternative, opts);
    } else {
      const auto opts = options(seed, config.trials_is, run);
      row.fa = estimate_importance(lrt, model, ErrorKind::FalseAlarm, opts);
      row.md = estimate_importance(lrt, model, ErrorKind::MissDetection, opts);
      if (!result.crossover.ran) {
        auto direct = options(seed, config.trials_direct, run);
        direct.first_trial = config.trials_is;
        auto& c = result.crossover;
        c.ran = true;
        c.n = n;
        c.direct_fa = estimate_direct(lrt, model, Hypothesis::Null, direct);
        c.direct_md = estimate_direct(lrt, model, Hypothesis::Alternative, direct);
        c.fa_agrees = agree_within(c.direct_fa, row.fa, kCrossoverSigmas);
        c.md_agrees = agree_within(c.direct_md, row.md, kCrossoverSigmas);
      }
    }
    if (result.regime.fa.fn != RateFunction::None) {
      fa_series.add(n, rate_g(result.regime.fa, model, result.regime), row.fa);
    }
    md_series.add(n, rate_g(result.regime.md, model, result.regime), row.md);
    result.rows.push_back(row);
  }

  const std::uint64_t n_min =
      config.fit_n_min.value_or(default_fit_n_min(result.regime.regime, config.n_grid.back()));
  for (const ErrorKind error : {ErrorKind::FalseAlarm, ErrorKind::MissDetection}) {
    const bool fa = error == ErrorKind::FalseAlarm;
    const RateSeries& series = fa ? fa_series : md_series;
    FitReport report;
    report.error = error;
    report.spec = result.regime.rate(fa);
    report.excluded = series.excluded;
    if (report.spec.fn == RateFunction::None) {
      report.skipped = "rate not characterized for these parameters";
    } else if (series.points.empty()) {
      throw std::runtime_error("every " + to_string(error) +
                               " estimate is zero; use importance sampling (lower is_threshold_n)");
    } else {
      try {
        report.fit = fit_rate(series.points, n_min, report.spec.fn);
        report.verdict = compare_to_theory(*report.fit, report.spec, result.regime.regime, error,
                                           config.tolerance);
      } catch (const std::invalid_argument& e) {
        report.skipped = e.what();
      }
    }
    result.fits.push_back(std::move(report));
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

Detector make_detector(TestKind kind, double threshold, const HcConfig& hc) {
  switch (kind) {
    case TestKind::Lrt:
      return Detector::oracle_lrt(threshold);
    case TestKind::Max:
      return Detector::max_test(threshold);
    case TestKind::Hc:
      return Detector::higher_criticism(threshold, hc);
    case TestKind::Acw:
      return Detector::acw(threshold);
  }
  return Detector::oracle_lrt(threshold);
}

std::vector<double> levels_of(const ExperimentConfig& c) {
  if (c.fa_levels.empty()) {
    throw ConfigError("fa_levels must list at least one level for adaptive tests");
  }
  return c.fa_levels;
}

AdaptiveResult adaptive(const ExperimentConfig& config, const RunOptions& run, bool evaluate) {
  config.validate();
  require_grid(config);
  const auto levels = levels_of(config);
  const std::uint64_t sims = config.effective_calibration_sims();
  const StreamId cal_stream{StreamTarget::FalseAlarm, StreamPurpose::Calibration};
  const StreamId eval_stream = stream_for(ErrorKind::MissDetection, StreamPurpose::Evaluation);

  AdaptiveResult result;
  for (const std::uint64_t n : config.n_grid) {
    const GaussianModel model = model_at(config, n);
    const std::uint64_t seed = cell_seed(config.seed, n);
    for (const TestKind kind : config.tests) {
      if (kind == TestKind::Max) {
        for (const double level : levels) {
          AdaptiveRow row;
          row.n = n;
          row.test = kind;
          row.threshold = calibrate_max_analytic(n, level);
          row.method = "analytic";
          row.p_md = max_test_error_probs(n, model.eps(), model.mu(), row.threshold.threshold).p_md;
          result.rows.push_back(row);
        }
        continue;
      }

      const Detector base = make_detector(kind, 0.0, config.hc);
      auto cal_opts = options(seed, sims, run);
      cal_opts.purpose = StreamPurpose::Calibration;
      const auto null_stats =
          simulate_statistics(base, model, Hypothesis::Null, sims, cal_stream, cal_opts);

      const bool use_is = kind == TestKind::Lrt && n >= config.is_threshold_n;
      std::vector<double> alt_stats;
      const auto eval_opts = options(seed, use_is ? config.trials_is : config.trials_direct, run);
      if (evaluate && !use_is) {
        alt_stats = simulate_statistics(base, model, Hypothesis::Alternative,
                                        config.trials_direct, eval_stream, eval_opts);
      }

      for (const double level : levels) {
        AdaptiveRow row;
        row.n = n;
        row.test = kind;
        row.threshold = calibrate_from_null_statistics(null_stats, level);
        row.threshold.seed = seed;
        row.threshold.stream = cal_stream;
        if (row.threshold.degenerate) {
          result.warnings.push_back("degenerate threshold for " + to_string(kind) + " at n = " +
                                    std::to_string(n) + ", level " + format_real(level) +
                                    ": ties push the achieved false-alarm rate to " +
                                    format_real(row.threshold.achieved_fa));
        }
        if (evaluate) {
          const Detector det = make_detector(kind, row.threshold.threshold, config.hc);
          ErrorEstimate est =
              use_is ? estimate_importance(det, model, ErrorKind::MissDetection, eval_opts)
                     : direct_from_statistics(alt_stats, det.threshold, Hypothesis::Alternative,
                                              eval_opts, eval_stream);
          if (est.stream.purpose == row.threshold.stream.purpose) {
            throw std::logic_error("calibration and evaluation share a stream");
          }
          row.method = to_string(est.method);
          row.p_md = est.p_hat;
          row.se_md = est.std_err;
          if (est.is_zero()) {
            row.upper_bound = true;
            row.p_md = est.resolution_floor();
          }
          row.estimate = est;
        }
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

std::string threshold_columns(const AdaptiveRow& row) {
  std::ostringstream out;
  out << row.n << ',' << to_string(row.test) << ',' << format_real(row.threshold.level) << ','
      << format_real(row.threshold.threshold) << ','
      << (row.threshold.method == CalibrationMethod::AnalyticMaxTest ? "analytic" : "empirical")
      << ',' << row.threshold.null_sims << ',' << format_real(row.threshold.achieved_fa) << ','
      << (row.threshold.degenerate ? "yes" : "no");
  return out.str();
}

}  // namespace

AdaptiveResult run_adaptive_comparison(const ExperimentConfig& config, const RunOptions& run) {
  return adaptive(config, run, true);
}

AdaptiveResult run_calibration(const ExperimentConfig& config, const RunOptions& run) {
  return adaptive(config, run, false);
}

std::string AdaptiveResult::csv() const {
  std::ostringstream out;
  out << "n,test,fa_level,threshold,threshold_method,null_sims,achieved_fa,degenerate,p_md,se_md,"
         "method_md,bound\n";
  for (const auto& row : rows) {
    out << threshold_columns(row) << ',' << format_real(row.p_md) << ','
        << format_real(row.se_md) << ',' << row.method << ','
        << (row.upper_bound ? "upper" : "estimate") << '\n';
  }
  return out.str();
}

std::string calibration_csv(const AdaptiveResult& result) {
  std::ostringstream out;
  out << "n,test,fa_level,threshold,threshold_method,null_sims,achieved_fa,degenerate\n";
  for (const auto& row : result.rows) {
    out << threshold_columns(row) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<RegimeMapRow> emit_regime_map(const std::vector<double>& beta_grid,
                                          const std::vector<double>& r_grid, Scaling scaling) {
  std::vector<RegimeMapRow> rows;
  rows.reserve(beta_grid.size() * r_grid.size());
  for (const double beta : beta_grid) {
    for (const double r : r_grid) {
      rows.push_back({beta, r, classify(beta, r, scaling)});
    }
  }
  return rows;
}

std::string regime_map_csv(const std::vector<RegimeMapRow>& rows) {
  std::ostringstream out;
  out << "beta,r,scaling,regime,rate_fn_fa,constant_fa,kind_fa,rate_fn_md,constant_md,kind_md\n";
  for (const auto& row : rows) {
    const auto& c = row.cls;
    out << format_real(row.beta) << ',' << format_real(row.r) << ',' << to_string(c.scaling) << ','
        << to_string(c.regime) << ',' << to_string(c.fa.fn) << ',' << format_real(c.fa.constant)
        << ',' << to_string(c.fa.kind) << ',' << to_string(c.md.fn) << ','
        << format_real(c.md.constant) << ',' << to_string(c.md.kind) << '\n';
  }
  return out.str();
}

}  // namespace sparsemix
