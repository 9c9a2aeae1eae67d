#include "bayup/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace bayup {

namespace {

struct FixedGridPrecomp {
  ParameterGrid grid;
  std::vector<double> log_theta;
  std::vector<double> log_1m_theta;
  std::vector<double> prior;  // sqrt of the strategy's Fisher curve
};

double draw_true_theta(const CoverageConfig& config, long long trial, Rng& rng) {
  const auto& rule = config.true_theta;
  switch (rule.kind) {
    case TrueThetaRule::Kind::fixed:
      return rule.value;
    case TrueThetaRule::Kind::uniform:
      return rng.uniform(rule.low, rule.high);
    case TrueThetaRule::Kind::value_grid: {
      const long long k = trial / rule.trials_per_value;
      if (rule.num_values == 1) return rule.low;
      return rule.low + k * (rule.high - rule.low) / (rule.num_values - 1);
    }
  }
  return rule.value;
}

std::vector<double> strategy_prior(const CoverageConfig& config, const ParameterGrid& grid) {
  FisherCurve fisher = FisherCurve::zero(grid);
  if (config.prior.combined) {
    for (const auto& model : config.experiments)
      fisher = combine_fisher(fisher, analytic_fisher(model, grid));
  } else {
    fisher = analytic_fisher(*config.prior.designated, grid);
  }
  return jeffreys_prior(fisher).values;
}

void accumulate_loglik_fast(const Model& model, const Observation& obs,
                            const FixedGridPrecomp& pre, std::vector<double>& loglik) {
  const int n = pre.grid.num_points;
  if (const auto* bin = std::get_if<BinomialModel>(&model)) {
    const double y = static_cast<double>(obs.count);
    const double ny = static_cast<double>(bin->num_trials - obs.count);
    for (int i = 0; i < n; ++i)
      loglik[i] += y * pre.log_theta[i] + ny * pre.log_1m_theta[i];
  } else if (const auto* nb = std::get_if<NegativeBinomialModel>(&model)) {
    const double r = static_cast<double>(nb->target_count);
    const double zr = static_cast<double>(obs.count - nb->target_count);
    for (int i = 0; i < n; ++i)
      loglik[i] += r * pre.log_theta[i] + zr * pre.log_1m_theta[i];
  } else {
    for (int i = 0; i < n; ++i)
      loglik[i] += log_likelihood(model, obs, pre.grid.point(i));
  }
}

// One trial on the shared Bernoulli grid.
double trial_statistic_fixed(const CoverageConfig& config, const FixedGridPrecomp& pre,
                             long long trial) {
  Rng rng = Rng::trial_stream(config.seed, static_cast<std::uint64_t>(trial));
  const double theta_true = draw_true_theta(config, trial, rng);
  std::vector<double> loglik(pre.grid.num_points, 0.0);
  for (const auto& model : config.experiments)
    accumulate_loglik_fast(model, sample(model, theta_true, rng), pre, loglik);
  const PosteriorCurve post = posterior_from(pre.grid, loglik, pre.prior);
  return cdf_at(post, theta_true);
}

// One trial with a per-trial auto-widened grid (continuous-parameter models).
double trial_statistic_widened(const CoverageConfig& config, long long trial) {
  Rng rng = Rng::trial_stream(config.seed, static_cast<std::uint64_t>(trial));
  const double theta_true = draw_true_theta(config, trial, rng);
  std::vector<Experiment> experiments;
  experiments.reserve(config.experiments.size());
  for (const auto& model : config.experiments)
    experiments.emplace_back(model, sample(model, theta_true, rng));
  const ParameterGrid grid = auto_widen_grid(experiments, config.grid.lower,
                                             config.grid.upper, config.grid.num_points);
  std::vector<double> loglik(grid.num_points, 0.0);
  for (const auto& [model, obs] : experiments)
    for (int i = 0; i < grid.num_points; ++i)
      loglik[i] += log_likelihood(model, obs, grid.point(i));
  const PosteriorCurve post = posterior_from(grid, loglik, strategy_prior(config, grid));
  return cdf_at(post, theta_true);
}

void validate(const CoverageConfig& config) {
  if (config.experiments.empty())
    throw std::invalid_argument("coverage config: experiment list is empty");
  if (!config.prior.combined && !config.prior.designated)
    throw std::invalid_argument("coverage config: designated prior model missing");
  if (total_trials(config) < 100)
    throw std::invalid_argument("coverage config: need at least 100 trials");
  const auto& rule = config.true_theta;
  if (rule.kind != TrueThetaRule::Kind::fixed && !(rule.low < rule.high))
    throw std::invalid_argument("coverage config: true-theta bounds must satisfy low < high");
  if (rule.kind == TrueThetaRule::Kind::value_grid &&
      (rule.num_values < 1 || rule.trials_per_value < 1))
    throw std::invalid_argument("coverage config: value grid needs counts >= 1");
}

}  // namespace

long long total_trials(const CoverageConfig& config) {
  if (config.true_theta.kind == TrueThetaRule::Kind::value_grid)
    return static_cast<long long>(config.true_theta.num_values) *
           config.true_theta.trials_per_value;
  return config.num_trials;
}

CoverageReport run_coverage(const CoverageConfig& config) {
  validate(config);
  const long long n_trials = total_trials(config);

  bool any_bernoulli = false;
  for (const auto& model : config.experiments)
    any_bernoulli = any_bernoulli || is_bernoulli_model(model);
  if (!config.prior.combined && config.prior.designated)
    any_bernoulli = any_bernoulli || is_bernoulli_model(*config.prior.designated);

  {
    const auto& rule = config.true_theta;
    const double support_lo =
        rule.kind == TrueThetaRule::Kind::fixed ? rule.value : rule.low;
    const double support_hi =
        rule.kind == TrueThetaRule::Kind::fixed ? rule.value : rule.high;
    const double grid_lo = any_bernoulli ? 1e-6 : config.grid.lower;
    const double grid_hi = any_bernoulli ? 1.0 - 1e-6 : config.grid.upper;
    if (!(support_lo > grid_lo && support_hi < grid_hi))
      throw std::invalid_argument(
          "coverage config: true-theta support must lie strictly inside the grid");
  }

  FixedGridPrecomp pre{bernoulli_grid(config.grid.num_points), {}, {}, {}};
  if (any_bernoulli) {
    const int n = pre.grid.num_points;
    pre.log_theta.resize(n);
    pre.log_1m_theta.resize(n);
    for (int i = 0; i < n; ++i) {
      const double th = pre.grid.point(i);
      pre.log_theta[i] = std::log(th);
      pre.log_1m_theta[i] = std::log1p(-th);
    }
    pre.prior = strategy_prior(config, pre.grid);
  }

  std::vector<double> stats(static_cast<std::size_t>(n_trials));
  const int n_threads =
      config.threads > 0 ? config.threads
                         : std::max(1u, std::thread::hardware_concurrency());

  std::atomic<long long> next_chunk{0};
  constexpr long long chunk = 256;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      const long long start = next_chunk.fetch_add(chunk);
      if (start >= n_trials || failed.load()) return;
      const long long end = std::min(start + chunk, n_trials);
      for (long long t = start; t < end; ++t) {
        try {
          stats[static_cast<std::size_t>(t)] =
              any_bernoulli ? trial_statistic_fixed(config, pre, t)
                            : trial_statistic_widened(config, t);
        } catch (...) {
          if (!failed.exchange(true)) {
            try {
              std::throw_with_nested(
                  std::runtime_error("coverage trial " + std::to_string(t) + " failed"));
            } catch (...) {
              failure = std::current_exception();
            }
          }
          return;
        }
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(stats.begin(), stats.end());
  CoverageReport report;
  report.proportions.resize(99);
  for (int p = 1; p <= 99; ++p) {
    const double threshold = p / 100.0;
    const auto it = std::upper_bound(stats.begin(), stats.end(), threshold);
    report.proportions[p - 1] =
        static_cast<double>(it - stats.begin()) / static_cast<double>(n_trials);
  }
  report.tail_below_5 = report.proportions[4];
  report.tail_above_95 = 1.0 - report.proportions[94];
  double mad = 0.0;
  for (int p = 1; p <= 99; ++p) mad += std::abs(report.proportions[p - 1] - p / 100.0);
  report.mean_abs_deviation = mad / 99.0;
  report.num_trials = n_trials;
  report.seed = config.seed;
  report.label = config.label;
  return report;
}

std::vector<std::size_t> compare_reports(const std::vector<CoverageReport>& reports) {
  std::vector<std::size_t> order(reports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].mean_abs_deviation < reports[b].mean_abs_deviation;
  });
  return order;
}

}  // namespace bayup
