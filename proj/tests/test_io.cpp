#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "bayup/coverage.hpp"
#include "bayup/io.hpp"

using namespace bayup;
using nlohmann::json;

TEST_CASE("coverage CSV round-trips exactly") {
  CoverageConfig config;
  config.experiments = {GaussianTransformModel(Transform::make_identity(), 1.0)};
  config.prior = PriorStrategy::combined_jeffreys();
  config.true_theta.kind = TrueThetaRule::Kind::uniform;
  config.true_theta.low = -1.0;
  config.true_theta.high = 1.0;
  config.num_trials = 400;
  config.seed = 4242;
  config.grid = GridSpec{-2.0, 2.0, 501};
  config.label = "roundtrip";
  const CoverageReport report = run_coverage(config);

  const std::string text = io::coverage_csv(report);
  const CoverageReport parsed = io::parse_coverage_csv(text);
  for (int p = 0; p < 99; ++p) CHECK(parsed.proportions[p] == report.proportions[p]);
  CHECK(parsed.tail_below_5 == report.tail_below_5);
  CHECK(parsed.tail_above_95 == report.tail_above_95);
  CHECK(parsed.mean_abs_deviation == report.mean_abs_deviation);
  CHECK(parsed.seed == report.seed);
  CHECK(parsed.num_trials == report.num_trials);
  CHECK(parsed.label == report.label);

  CHECK_THROWS_AS(io::parse_coverage_csv("bogus\n"), std::invalid_argument);
}

TEST_CASE("fisher table CSV carries a small relative error column") {
  const std::string text =
      io::fisher_table_csv(Model(BinomialModel(40)), ParameterGrid(0.01, 0.99, 101));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,h_analytic,h_oracle,rel_err");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    CHECK(std::stod(line.substr(last_comma + 1)) < 1e-6);
    ++rows;
  }
  CHECK(rows == 101);
}

TEST_CASE("posterior CSV shape") {
  const ParameterGrid grid(-2.0, 2.0, 201);
  const Model a = GaussianTransformModel(Transform::make_identity(), 1.0);
  InferenceState state(grid);
  state = ingest(state, a, Observation::real_value(0.0));
  const PosteriorCurve post = posterior_revised(state);
  const PriorCurve prior = jeffreys_prior({grid, state.cum_fisher});
  const std::string text = io::posterior_csv(grid, prior.values, post);
  CHECK(text.rfind("theta,prior,density,cdf\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 202);
}

TEST_CASE("svg output is present and deterministic") {
  CoverageReport r;
  r.proportions.assign(99, 0.5);
  r.label = "flat";
  const std::string svg = io::coverage_svg({r}, "title");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("flat") != std::string::npos);
  CHECK(svg == io::coverage_svg({r}, "title"));
}

TEST_CASE("model spec parsing") {
  const Model g = io::parse_model(json::parse(
      R"({"kind":"gaussian","transform":{"kind":"cube"},"sigma":2.0})"));
  CHECK(std::get<GaussianTransformModel>(g).noise_sd == 2.0);

  const Model b = io::parse_model(json::parse(R"({"kind":"binomial","n":40})"));
  CHECK(std::get<BinomialModel>(b).num_trials == 40);

  const Model nb = io::parse_model(json::parse(R"({"kind":"negbinomial","r":2})"));
  CHECK(std::get<NegativeBinomialModel>(nb).target_count == 2);

  const Model poly = io::parse_model(json::parse(
      R"({"kind":"gaussian","transform":{"kind":"poly","coefficients":[1,0,2]},"sigma":1})"));
  CHECK(std::get<GaussianTransformModel>(poly).transform.value(3.0) == 19.0);

  CHECK_THROWS_AS(io::parse_model(json::parse(R"({"kind":"weibull"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::parse_model(json::parse(R"({"kind":"binomial","n":40,"p":0.5})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      io::parse_model(json::parse(R"({"kind":"gaussian","transform":{"kind":"cube"}})")),
      std::invalid_argument);
}

TEST_CASE("coverage config parsing") {
  const json config = json::parse(R"({
    "experiments": [{"kind":"binomial","n":40},{"kind":"negbinomial","r":2}],
    "prior": "combined",
    "true_theta": {"kind":"grid","low":0.01,"high":0.11,"num_values":100,"trials_per_value":2000},
    "seed": 7
  })");
  const CoverageConfig parsed = io::parse_coverage_config(config);
  CHECK(parsed.experiments.size() == 2);
  CHECK(parsed.prior.combined);
  CHECK(total_trials(parsed) == 200000);
  CHECK(parsed.seed == 7);

  json bad = config;
  bad["bogus_key"] = 1;
  CHECK_THROWS_AS(io::parse_coverage_config(bad), std::invalid_argument);

  json designated = config;
  designated["prior"] = json::parse(R"({"model":{"kind":"binomial","n":40}})");
  CHECK_FALSE(io::parse_coverage_config(designated).prior.combined);

  // empty experiment list must be rejected by the runner
  json empty = config;
  empty["experiments"] = json::array();
  CHECK_THROWS_AS(run_coverage(io::parse_coverage_config(empty)), std::invalid_argument);
}

TEST_CASE("posterior and fisher-table config parsing") {
  const auto request = io::parse_posterior_config(json::parse(R"({
    "experiments": [
      {"model": {"kind":"gaussian","transform":{"kind":"identity"},"sigma":1.0},
       "observation": 0.0}
    ]
  })"));
  CHECK(request.experiments.size() == 1);
  CHECK_FALSE(request.has_grid);
  CHECK(request.prior.combined);

  CHECK_THROWS_AS(io::parse_posterior_config(json::parse(R"({"experiments":[]})")),
                  std::invalid_argument);

  const auto fisher = io::parse_fisher_table_config(
      json::parse(R"({"model":{"kind":"binomial","n":40}})"));
  CHECK(std::get<BinomialModel>(fisher.model).num_trials == 40);
  CHECK(fisher.grid.num_points == 101);
}
