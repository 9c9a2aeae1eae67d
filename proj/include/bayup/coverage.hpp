#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayup/inference.hpp"
#include "bayup/models.hpp"

namespace bayup {

// How the true parameter is chosen for each trial.
struct TrueThetaRule {
  enum class Kind { fixed, uniform, value_grid };
  Kind kind = Kind::fixed;
  double value = 0.0;              // fixed
  double low = 0.0, high = 0.0;    // uniform / value_grid bounds
  int num_values = 0;              // value_grid: equally spaced values
  long long trials_per_value = 0;  // value_grid: trials at each value
};

// Which Jeffreys prior the posterior uses: the combined-information prior
// (revised updating) or the prior of one designated experiment (standard
// sequential updating with that experiment first).
struct PriorStrategy {
  bool combined = true;
  std::optional<Model> designated;

  static PriorStrategy combined_jeffreys() { return {}; }
  static PriorStrategy from_model(Model m) { return {false, std::move(m)}; }
};

struct GridSpec {
  double lower = -3.0;
  double upper = 3.0;
  int num_points = 2001;
};

struct CoverageConfig {
  std::vector<Model> experiments;
  PriorStrategy prior;
  TrueThetaRule true_theta;
  long long num_trials = 0;  // ignored for value_grid rules
  std::uint64_t seed = 0;
  GridSpec grid;
  int threads = 0;  // 0 = hardware concurrency
  std::string label;
};

// Empirical one-sided coverage at each integer percentile: the fraction of
// trials in which the posterior CDF at the true parameter was <= p/100.
struct CoverageReport {
  std::vector<double> proportions;  // index p-1 holds percentile p, p = 1..99
  double tail_below_5 = 0.0;
  double tail_above_95 = 0.0;
  double mean_abs_deviation = 0.0;
  long long num_trials = 0;
  std::uint64_t seed = 0;
  std::string label;
};

long long total_trials(const CoverageConfig& config);

CoverageReport run_coverage(const CoverageConfig& config);

// Indices into `reports` ordered by mean_abs_deviation ascending; ties keep
// input order.
std::vector<std::size_t> compare_reports(const std::vector<CoverageReport>& reports);

}  // namespace bayup
