#include "bayup/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bayup {

namespace {

void require_model_domain(const Model& model, const ParameterGrid& grid) {
  if (is_bernoulli_model(model) && !(grid.lower > 0.0 && grid.upper < 1.0))
    throw std::domain_error("Bernoulli model requires a grid strictly inside (0,1)");
}

}  // namespace

LogLikelihoodCurve log_likelihood_curve(const Model& model, const Observation& obs,
                                        const ParameterGrid& grid) {
  require_model_domain(model, grid);
  LogLikelihoodCurve curve{grid, std::vector<double>(grid.num_points)};
  for (int i = 0; i < grid.num_points; ++i)
    curve.log_values[i] = log_likelihood(model, obs, grid.point(i));
  return curve;
}

InferenceState ingest(const InferenceState& state, const Model& model,
                      const Observation& obs) {
  require_model_domain(model, state.grid);
  InferenceState out = state;
  for (int i = 0; i < state.grid.num_points; ++i) {
    const double theta = state.grid.point(i);
    out.cum_loglik[i] += log_likelihood(model, obs, theta);
    out.cum_fisher[i] += analytic_fisher_at(model, theta);
  }
  return out;
}

InferenceState ingest_curves(const InferenceState& state, const LogLikelihoodCurve& loglik,
                             const FisherCurve& fisher) {
  require_same_grid(state.grid, loglik.grid);
  require_same_grid(state.grid, fisher.grid);
  InferenceState out = state;
  for (int i = 0; i < state.grid.num_points; ++i) {
    out.cum_loglik[i] += loglik.log_values[i];
    out.cum_fisher[i] += fisher.values[i];
  }
  return out;
}

PriorCurve jeffreys_prior(const FisherCurve& fisher) {
  PriorCurve prior{fisher.grid, std::vector<double>(fisher.grid.num_points)};
  for (int i = 0; i < fisher.grid.num_points; ++i) {
    if (fisher.values[i] < 0.0)
      throw std::domain_error("Fisher information must be nonnegative");
    prior.values[i] = std::sqrt(fisher.values[i]);
  }
  return prior;
}

PosteriorCurve posterior_from(const ParameterGrid& grid, const std::vector<double>& loglik,
                              const std::vector<double>& prior) {
  const int n = grid.num_points;
  std::vector<double> log_w(n);
  double max_w = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    log_w[i] = prior[i] > 0.0 ? loglik[i] + std::log(prior[i])
                              : -std::numeric_limits<double>::infinity();
    max_w = std::max(max_w, log_w[i]);
  }
  if (!std::isfinite(max_w))
    throw std::runtime_error("posterior weight vanished everywhere on the grid");

  PosteriorCurve post{grid, std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i)
    post.density[i] = std::isfinite(log_w[i]) ? std::exp(log_w[i] - max_w) : 0.0;

  const double dx = grid.spacing();
  post.cdf[0] = 0.0;
  for (int i = 1; i < n; ++i)
    post.cdf[i] = post.cdf[i - 1] + 0.5 * dx * (post.density[i - 1] + post.density[i]);
  const double total = post.cdf[n - 1];
  if (!(total > 1e-300))
    throw std::runtime_error("posterior mass underflow before normalization");
  for (int i = 0; i < n; ++i) {
    post.density[i] /= total;
    post.cdf[i] /= total;
  }
  return post;
}

PosteriorCurve posterior_revised(const InferenceState& state) {
  bool any_fisher = false;
  for (double h : state.cum_fisher)
    if (h > 0.0) { any_fisher = true; break; }
  if (!any_fisher)
    throw std::runtime_error("posterior_revised: no experiment with nonzero Fisher curve");
  const PriorCurve prior = jeffreys_prior({state.grid, state.cum_fisher});
  return posterior_from(state.grid, state.cum_loglik, prior.values);
}

PosteriorCurve posterior_standard_sequential(const std::vector<Experiment>& experiments,
                                             const ParameterGrid& grid) {
  if (experiments.empty())
    throw std::invalid_argument("posterior_standard_sequential: empty experiment list");
  std::vector<double> loglik(grid.num_points, 0.0);
  for (const auto& [model, obs] : experiments) {
    require_model_domain(model, grid);
    for (int i = 0; i < grid.num_points; ++i)
      loglik[i] += log_likelihood(model, obs, grid.point(i));
  }
  const PriorCurve prior = jeffreys_prior(analytic_fisher(experiments.front().first, grid));
  return posterior_from(grid, loglik, prior.values);
}

double quantile(const PosteriorCurve& post, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
  const auto& cdf = post.cdf;
  const int n = post.grid.num_points;
  for (int i = 1; i < n; ++i) {
    if (cdf[i] >= p) {
      const double lo = cdf[i - 1];
      const double hi = cdf[i];
      const double t = hi > lo ? (p - lo) / (hi - lo) : 0.0;
      return post.grid.point(i - 1) + t * post.grid.spacing();
    }
  }
  return post.grid.upper;
}

double cdf_at(const PosteriorCurve& post, double theta) {
  const auto& g = post.grid;
  if (theta < g.lower || theta > g.upper)
    throw std::out_of_range("cdf_at: theta outside the grid");
  const double pos = (theta - g.lower) / g.spacing();
  int i = static_cast<int>(pos);
  if (i >= g.num_points - 1) return post.cdf[g.num_points - 1];
  const double t = pos - i;
  return post.cdf[i] + t * (post.cdf[i + 1] - post.cdf[i]);
}

ParameterGrid auto_widen_grid(const std::vector<Experiment>& experiments, double lower,
                              double upper, int num_points) {
  const double log_tol = std::log(1e-10);
  double lo = lower;
  double hi = upper;
  for (int round = 0; round < 200; ++round) {
    double max_ll = -std::numeric_limits<double>::infinity();
    const ParameterGrid grid(lo, hi, num_points);
    auto total_ll = [&](double theta) {
      double s = 0.0;
      for (const auto& [model, obs] : experiments) s += log_likelihood(model, obs, theta);
      return s;
    };
    for (int i = 0; i < num_points; ++i)
      max_ll = std::max(max_ll, total_ll(grid.point(i)));
    const bool left_ok = total_ll(lo) - max_ll < log_tol;
    const bool right_ok = total_ll(hi) - max_ll < log_tol;
    if (left_ok && right_ok) return grid;
    const double width = hi - lo;
    if (!left_ok) lo -= 0.25 * width;
    if (!right_ok) hi += 0.25 * width;
  }
  throw std::runtime_error("auto_widen_grid: bounds failed to stabilize");
}

ParameterGrid bernoulli_grid(int num_points) {
  return ParameterGrid(1e-6, 1.0 - 1e-6, num_points);
}

}  // namespace bayup
