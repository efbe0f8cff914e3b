#ifndef SPARSEMIX_CONFIG_HPP_
#define SPARSEMIX_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsemix/detectors.hpp"
#include "sparsemix/model.hpp"
#include "sparsemix/regimes.hpp"

namespace sparsemix {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*
 * Experiment description.
 *
 * Text format: one `key = value` per line, `#` starts a comment. Lists are
 * comma separated. Numeric grids may also be written `lo:hi:count`, which is
 * log-spaced (rounded to integers) for n_grid and linear for beta_grid and
 * r_grid. Unknown or repeated keys are errors.
 *
 *   beta            real in (0, 1)
 *   signal          sparse_r | dense_power | explicit
 *   r               signal exponent (sparse_r, dense_power)
 *   mu              constant shift for every n of n_grid (explicit)
 *   mu_table        n:mu pairs (explicit)
 *   n_grid          strictly increasing sample sizes
 *   tests           subset of lrt, max, hc, acw
 *   fa_levels       false-alarm levels in (0, 1), or `oracle`
 *   trials_direct   direct Monte Carlo trials per cell (>= 100)
 *   trials_is       importance sampling trials per cell (>= 100)
 *   is_threshold_n  importance sampling from this n on
 *   seed            64-bit master seed
 *   output          output directory
 *   calibration_sims  null simulations per calibrated threshold
 *   fit_n_min       smallest n used in slope fits
 *   tolerance       slope tolerance for theory comparisons
 *   beta_grid, r_grid, scaling   regime map
 *   hc_range        `full` or `lo:hi` index fractions
 */
struct ExperimentConfig {
  ModelParams params{0.6, SparseR{0.19}};
  std::vector<std::uint64_t> n_grid;
  std::vector<TestKind> tests{TestKind::Lrt};
  /// Empty means the oracle likelihood ratio test at threshold 0.
  std::vector<double> fa_levels;
  std::uint64_t trials_direct = 10000;
  std::uint64_t trials_is = 10000;
  std::uint64_t is_threshold_n = 100000;
  std::uint64_t seed = 1;
  std::string output = "out";
  std::uint64_t calibration_sims = 0;  ///< 0: max(10000, minimum for the smallest level)
  std::optional<std::uint64_t> fit_n_min;
  double tolerance = 0.05;
  std::vector<double> beta_grid;
  std::vector<double> r_grid;
  Scaling scaling = Scaling::SparseR;
  HcConfig hc{};

  [[nodiscard]] bool oracle() const { return fa_levels.empty(); }

  /// Throws ConfigError on any invariant violation.
  void validate() const;

  /// Effective calibration budget for the configured levels.
  [[nodiscard]] std::uint64_t effective_calibration_sims() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace sparsemix

#endif  // SPARSEMIX_CONFIG_HPP_
