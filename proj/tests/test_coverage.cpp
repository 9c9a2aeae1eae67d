#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bayup/coverage.hpp"

using namespace bayup;

namespace {

CoverageConfig location_config(long long trials, std::uint64_t seed) {
  CoverageConfig config;
  config.experiments = {GaussianTransformModel(Transform::make_identity(), 1.0)};
  config.prior = PriorStrategy::combined_jeffreys();
  config.true_theta.kind = TrueThetaRule::Kind::uniform;
  config.true_theta.low = -2.0;
  config.true_theta.high = 2.0;
  config.num_trials = trials;
  config.seed = seed;
  config.grid = GridSpec{-3.0, 3.0, 1001};
  return config;
}

}  // namespace

TEST_CASE("exact location matching stays within binomial noise") {
  const long long n = 4000;
  const CoverageReport report = run_coverage(location_config(n, 31));
  for (int p = 1; p <= 99; ++p) {
    const double nominal = p / 100.0;
    const double se = std::sqrt(nominal * (1.0 - nominal) / n);
    CHECK(std::abs(report.proportions[p - 1] - nominal) < 4.0 * se);
  }
  CHECK(report.tail_below_5 == report.proportions[4]);
  CHECK(report.tail_above_95 == doctest::Approx(1.0 - report.proportions[94]).epsilon(1e-15));
}

TEST_CASE("proportions are nondecreasing and reports are schedule independent") {
  CoverageConfig config = location_config(1500, 77);
  config.threads = 1;
  const CoverageReport serial = run_coverage(config);
  config.threads = 4;
  const CoverageReport parallel = run_coverage(config);
  for (int p = 0; p < 99; ++p) {
    CHECK(serial.proportions[p] == parallel.proportions[p]);
    if (p > 0) CHECK(serial.proportions[p] >= serial.proportions[p - 1]);
  }

  // and repeated runs are bit-identical
  const CoverageReport again = run_coverage(config);
  for (int p = 0; p < 99; ++p) CHECK(parallel.proportions[p] == again.proportions[p]);
}

TEST_CASE("Bernoulli value-grid rule") {
  CoverageConfig config;
  config.experiments = {BinomialModel(40)};
  config.prior = PriorStrategy::combined_jeffreys();
  config.true_theta.kind = TrueThetaRule::Kind::value_grid;
  config.true_theta.low = 0.01;
  config.true_theta.high = 0.11;
  config.true_theta.num_values = 10;
  config.true_theta.trials_per_value = 20;
  config.seed = 9;
  CHECK(total_trials(config) == 200);
  const CoverageReport report = run_coverage(config);
  CHECK(report.num_trials == 200);
  for (int p = 1; p < 99; ++p)
    CHECK(report.proportions[p] >= report.proportions[p - 1]);
  CHECK(report.mean_abs_deviation >= 0.0);
}

TEST_CASE("designated-prior strategy runs") {
  CoverageConfig config;
  config.experiments = {BinomialModel(40), NegativeBinomialModel(2)};
  config.prior = PriorStrategy::from_model(NegativeBinomialModel(2));
  config.true_theta.kind = TrueThetaRule::Kind::fixed;
  config.true_theta.value = 0.06;
  config.num_trials = 300;
  config.seed = 12;
  const CoverageReport report = run_coverage(config);
  CHECK(report.num_trials == 300);
}

TEST_CASE("config validation") {
  CoverageConfig config = location_config(1000, 1);
  config.experiments.clear();
  CHECK_THROWS_AS(run_coverage(config), std::invalid_argument);

  config = location_config(50, 1);
  CHECK_THROWS_AS(run_coverage(config), std::invalid_argument);

  config = location_config(1000, 1);
  config.prior = PriorStrategy{false, std::nullopt};
  CHECK_THROWS_AS(run_coverage(config), std::invalid_argument);

  // true-theta support must sit strictly inside the grid
  config = location_config(1000, 1);
  config.true_theta.low = -5.0;
  CHECK_THROWS_AS(run_coverage(config), std::invalid_argument);
}

TEST_CASE("compare_reports orders by mean absolute deviation") {
  CoverageReport a;
  a.proportions.assign(99, 0.0);
  a.mean_abs_deviation = 0.02;
  a.label = "a";
  CoverageReport b = a;
  b.mean_abs_deviation = 0.01;
  b.label = "b";
  CoverageReport c = a;
  c.label = "c";

  const auto order = compare_reports({a, b, c});
  CHECK(order == std::vector<std::size_t>{1, 0, 2});  // tie between a and c keeps input order
  CHECK(compare_reports({a}) == std::vector<std::size_t>{0});
}
