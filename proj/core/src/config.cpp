#include "sparsemix/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sparsemix/estimation.hpp"

namespace sparsemix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    out.push_back(trim(item));
  }
  if (!s.empty() && s.back() == sep) {
    out.emplace_back();
  }
  return out;
}

double to_real(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec == std::errc() && ptr == end) {
    return v;
  }
  // Allow 1e6 style.
  const double d = to_real(key, s);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError(key + ": '" + s + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> real_grid(const std::string& key, const std::string& s) {
  const auto range = split(s, ':');
  if (range.size() == 3) {
    const double lo = to_real(key, range[0]);
    const double hi = to_real(key, range[1]);
    const std::uint64_t count = to_count(key, range[2]);
    if (count < 2 || !(hi > lo)) {
      throw ConfigError(key + ": range needs lo < hi and count >= 2");
    }
    std::vector<double> out(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    out.push_back(to_real(key, item));
  }
  return out;
}

std::vector<std::uint64_t> n_grid(const std::string& key, const std::string& s) {
  const auto range = split(s, ':');
  if (range.size() == 3) {
    const double lo = static_cast<double>(to_count(key, range[0]));
    const double hi = static_cast<double>(to_count(key, range[1]));
    const std::uint64_t count = to_count(key, range[2]);
    if (count < 2 || !(hi > lo) || lo < 1.0) {
      throw ConfigError(key + ": range needs 1 <= lo < hi and count >= 2");
    }
    std::vector<std::uint64_t> out(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::uint64_t i = 0; i < count; ++i) {
      out[i] = static_cast<std::uint64_t>(std::llround(lo * std::exp(step * static_cast<double>(i))));
    }
    out.front() = static_cast<std::uint64_t>(lo);
    out.back() = static_cast<std::uint64_t>(hi);
    return out;
  }
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) {
    out.push_back(to_count(key, item));
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw ConfigError("n_grid must be strictly increasing positive integers");
    }
  }
  if (tests.empty()) {
    throw ConfigError("tests must name at least one test");
  }
  for (const double a : fa_levels) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ConfigError("fa_levels must lie in (0, 1)");
    }
  }
  if (trials_direct < 100 || trials_is < 100) {
    throw ConfigError("trials_direct and trials_is must be at least 100");
  }
  if (calibration_sims != 0 && !fa_levels.empty()) {
    const double smallest = *std::min_element(fa_levels.begin(), fa_levels.end());
    if (calibration_sims < min_null_sims(smallest)) {
      throw ConfigError("calibration_sims below the minimum " +
                        std::to_string(min_null_sims(smallest)) + " for level " +
                        std::to_string(smallest));
    }
  }
  if (!(tolerance >= 0.0)) {
    throw ConfigError("tolerance must be non-negative");
  }
  for (const double b : beta_grid) {
    if (!(b > 0.0 && b < 1.0)) {
      throw ConfigError("beta_grid values must lie in (0, 1)");
    }
  }
  for (const double r : r_grid) {
    if (scaling == Scaling::SparseR ? !(r > 0.0 && r < 1.0) : !(r > -1.0 && r < 1.0)) {
      throw ConfigError("r_grid values out of range for the chosen scaling");
    }
  }
}

std::uint64_t ExperimentConfig::effective_calibration_sims() const {
  if (calibration_sims != 0) {
    return calibration_sims;
  }
  std::uint64_t sims = 10000;
  for (const double a : fa_levels) {
    sims = std::max(sims, min_null_sims(a));
  }
  return sims;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": missing key");
    }
    if (!entries.emplace(key, std::make_pair(value, lineno)).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  static const std::set<std::string> known = {
      "beta",       "signal",     "r",          "mu",           "mu_table",
      "n_grid",     "tests",      "fa_levels",  "trials_direct", "trials_is",
      "is_threshold_n", "seed",   "output",     "calibration_sims", "fit_n_min",
      "tolerance",  "beta_grid",  "r_grid",     "scaling",      "hc_range"};
  for (const auto& [key, entry] : entries) {
    if (!known.contains(key)) {
      throw ConfigError("line " + std::to_string(entry.second) + ": unknown key '" + key + "'");
    }
  }
  const auto get = [&](const std::string& key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.first;
  };

  ExperimentConfig c;
  if (const auto* v = get("beta")) c.params.beta = to_real("beta", *v);
  if (const auto* v = get("n_grid")) c.n_grid = n_grid("n_grid", *v);

  const std::string kind = get("signal") ? *get("signal") : "sparse_r";
  if (kind == "sparse_r" || kind == "dense_power") {
    if (get("mu") || get("mu_table")) {
      throw ConfigError("mu and mu_table need signal = explicit");
    }
    const double r = get("r") ? to_real("r", *get("r")) : (kind == "sparse_r" ? 0.19 : 0.0);
    if (kind == "sparse_r") {
      c.params.signal = SparseR{r};
    } else {
      c.params.signal = DensePower{r};
    }
  } else if (kind == "explicit") {
    if (get("r")) {
      throw ConfigError("r is not used with signal = explicit");
    }
    ExplicitMu table;
    if (const auto* v = get("mu_table")) {
      for (const auto& item : split(*v, ',')) {
        const auto pair = split(item, ':');
        if (pair.size() != 2) {
          throw ConfigError("mu_table: expected n:mu pairs, got '" + item + "'");
        }
        table.table.emplace_back(to_count("mu_table", pair[0]), to_real("mu_table", pair[1]));
      }
      if (get("mu")) {
        throw ConfigError("give either mu or mu_table, not both");
      }
    } else if (const auto* mu = get("mu")) {
      const double m = to_real("mu", *mu);
      if (c.n_grid.empty()) {
        throw ConfigError("mu needs n_grid");
      }
      for (const auto n : c.n_grid) {
        table.table.emplace_back(n, m);
      }
    } else {
      throw ConfigError("signal = explicit needs mu or mu_table");
    }
    c.params.signal = std::move(table);
  } else {
    throw ConfigError("signal must be sparse_r, dense_power or explicit");
  }

  if (const auto* v = get("tests")) {
    c.tests.clear();
    for (const auto& item : split(*v, ',')) {
      if (item.empty()) {
        continue;
      }
      try {
        c.tests.push_back(parse_test_kind(item));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (const auto* v = get("fa_levels")) {
    if (*v != "oracle") {
      c.fa_levels = real_grid("fa_levels", *v);
      if (c.fa_levels.empty()) {
        throw ConfigError("fa_levels is empty");
      }
    }
  }
  if (const auto* v = get("trials_direct")) c.trials_direct = to_count("trials_direct", *v);
  if (const auto* v = get("trials_is")) c.trials_is = to_count("trials_is", *v);
  if (const auto* v = get("is_threshold_n")) c.is_threshold_n = to_count("is_threshold_n", *v);
  if (const auto* v = get("seed")) c.seed = to_count("seed", *v);
  if (const auto* v = get("output")) c.output = *v;
  if (const auto* v = get("calibration_sims")) c.calibration_sims = to_count("calibration_sims", *v);
  if (const auto* v = get("fit_n_min")) c.fit_n_min = to_count("fit_n_min", *v);
  if (const auto* v = get("tolerance")) c.tolerance = to_real("tolerance", *v);
  if (const auto* v = get("beta_grid")) c.beta_grid = real_grid("beta_grid", *v);
  if (const auto* v = get("r_grid")) c.r_grid = real_grid("r_grid", *v);
  if (const auto* v = get("scaling")) {
    if (*v == "sparse_r") {
      c.scaling = Scaling::SparseR;
    } else if (*v == "dense_power") {
      c.scaling = Scaling::DensePower;
    } else {
      throw ConfigError("scaling must be sparse_r or dense_power");
    }
  }
  if (const auto* v = get("hc_range")) {
    if (*v != "full") {
      const auto pair = split(*v, ':');
      if (pair.size() != 2) {
        throw ConfigError("hc_range must be 'full' or lo:hi");
      }
      try {
        c.hc = HcConfig::restricted_to(to_real("hc_range", pair[0]), to_real("hc_range", pair[1]));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sparsemix
