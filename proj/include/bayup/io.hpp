#pragma once

#include <string>
#include <vector>

#include "bayup/coverage.hpp"
#include "bayup/inference.hpp"
#include "bayup/models.hpp"

#include <json.hpp>

namespace bayup::io {

// shortest round-trip decimal representation
std::string format_double(double x);

// header `percentile,proportion`, 99 rows, then `# key=value` comment lines
std::string coverage_csv(const CoverageReport& report);
CoverageReport parse_coverage_csv(const std::string& text);

// columns theta, h_analytic, h_oracle, rel_err
std::string fisher_table_csv(const Model& model, const ParameterGrid& grid);

// columns theta, prior, density, cdf
std::string posterior_csv(const ParameterGrid& grid, const std::vector<double>& prior,
                          const PosteriorCurve& post);

// coverage-vs-percentile polyline chart with the unit diagonal for reference
std::string coverage_svg(const std::vector<CoverageReport>& reports,
                         const std::string& title);

// --- JSON config parsing; unknown keys are errors ---

Model parse_model(const nlohmann::json& spec);
GridSpec parse_grid_spec(const nlohmann::json& spec, const GridSpec& defaults);
CoverageConfig parse_coverage_config(const nlohmann::json& config);

struct PosteriorRequest {
  std::vector<Experiment> experiments;
  PriorStrategy prior;
  GridSpec grid;
  bool has_grid = false;  // false: auto-widen (continuous) or clamp (Bernoulli)
};
PosteriorRequest parse_posterior_config(const nlohmann::json& config);

struct FisherTableRequest {
  Model model;
  GridSpec grid;
};
FisherTableRequest parse_fisher_table_config(const nlohmann::json& config);

}  // namespace bayup::io
