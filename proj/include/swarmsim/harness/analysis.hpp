#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "swarmsim/harness/results_csv.hpp"
#include "swarmsim/harness/stats.hpp"

namespace swarmsim {

struct ConfigSummary {
  GridPoint point;
  std::size_t trials = 0;
  std::size_t timeouts = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SweepSummary {
  std::vector<ConfigSummary> configs;  // ordered by config id
  std::size_t trials = 0;
  std::size_t timeouts = 0;
  double censor_at = 180.0;
  // raw trial distribution (timeouts at the censor value)
  double trial_min = 0.0;
  double trial_max = 0.0;
  double trial_mean = 0.0;
  // spread of the per-configuration means
  double config_mean_min = 0.0;
  double config_mean_max = 0.0;
  double grand_mean = 0.0;  // mean of the per-configuration means
  std::vector<stats::Coefficient> regression;  // intercept, speed, separation, broadcast

  [[nodiscard]] const stats::Coefficient &coefficient(std::string_view name) const {
    for (const auto &c : regression)
      if (c.name == name) return c;
    throw std::out_of_range("no coefficient " + std::string(name));
  }
};

/// Completion time of a row; timeouts are censored at `censor_at`.
[[nodiscard]] inline double censored_completion(const ResultRow &row, double censor_at) {
  return row.result.completion_time.value_or(censor_at);
}

/// Distribution summary plus OLS of completion time on z-scored speed,
/// separation and broadcast duration. Throws stats::SingularDesign when a
/// parameter has a single level.
[[nodiscard]] inline SweepSummary fit_performance_model(const std::vector<ResultRow> &rows,
                                                        double censor_at = 180.0) {
  if (rows.empty()) throw stats::SingularDesign("no results");
  SweepSummary s;
  s.censor_at = censor_at;
  s.trials = rows.size();

  std::vector<double> y, speed, separation, broadcast;
  y.reserve(rows.size());
  std::map<int, ConfigSummary> by_config;
  double total = 0.0;
  s.trial_min = std::numeric_limits<double>::infinity();
  s.trial_max = -std::numeric_limits<double>::infinity();
  for (const auto &row : rows) {
    const double t = censored_completion(row, censor_at);
    const bool timeout = !row.result.completion_time;
    y.push_back(t);
    speed.push_back(row.point.speed);
    separation.push_back(row.point.separation);
    broadcast.push_back(row.point.broadcast);
    total += t;
    s.trial_min = std::min(s.trial_min, t);
    s.trial_max = std::max(s.trial_max, t);
    s.timeouts += timeout ? 1 : 0;

    auto [it, inserted] = by_config.try_emplace(row.point.config_id);
    auto &c = it->second;
    if (inserted) {
      c.point = row.point;
      c.min = t;
      c.max = t;
    }
    ++c.trials;
    c.timeouts += timeout ? 1 : 0;
    c.mean += t;
    c.min = std::min(c.min, t);
    c.max = std::max(c.max, t);
  }
  s.trial_mean = total / static_cast<double>(rows.size());

  s.config_mean_min = std::numeric_limits<double>::infinity();
  s.config_mean_max = -std::numeric_limits<double>::infinity();
  double mean_sum = 0.0;
  for (auto &[id, c] : by_config) {
    c.mean /= static_cast<double>(c.trials);
    s.config_mean_min = std::min(s.config_mean_min, c.mean);
    s.config_mean_max = std::max(s.config_mean_max, c.mean);
    mean_sum += c.mean;
    s.configs.push_back(c);
  }
  s.grand_mean = mean_sum / static_cast<double>(s.configs.size());

  const std::vector<std::vector<double>> predictors{stats::z_score(speed).values, stats::z_score(separation).values,
                                                    stats::z_score(broadcast).values};
  const std::vector<std::string> names{"speed", "separation", "broadcast"};
  s.regression = stats::ols(predictors, names, y).coefficients;
  return s;
}

inline void print_summary(std::ostream &out, const SweepSummary &s) {
  out << fmt::format("trials: {}  timeouts: {} (censored at {:g} s)\n", s.trials, s.timeouts, s.censor_at);
  out << fmt::format("completion time, trials: min {:.1f}  max {:.1f}  mean {:.1f} s\n", s.trial_min, s.trial_max,
                     s.trial_mean);
  out << fmt::format("completion time, per-config means: min {:.1f}  max {:.1f}  grand mean {:.1f} s ({} configs)\n",
                     s.config_mean_min, s.config_mean_max, s.grand_mean, s.configs.size());
  out << "\nOLS on z-scored predictors\n";
  out << fmt::format("{:<12}{:>12}{:>12}{:>10}{:>12}\n", "term", "estimate", "std.err", "t", "p");
  for (const auto &c : s.regression)
    out << fmt::format("{:<12}{:>12.4f}{:>12.4f}{:>10.2f}{:>12.3g}\n", c.name, c.estimate, c.std_error, c.t, c.p);
}

}  // namespace swarmsim
