#pragma once

#include <utility>
#include <vector>

#include "bayup/fisher.hpp"
#include "bayup/grid.hpp"
#include "bayup/models.hpp"

namespace bayup {

// Log-likelihood on the grid; stored shift-unnormalized, consumers subtract
// the running maximum before exponentiating.
struct LogLikelihoodCurve {
  ParameterGrid grid;
  std::vector<double> log_values;
};

// Unnormalized prior weight function; proportionality is all that matters.
struct PriorCurve {
  ParameterGrid grid;
  std::vector<double> values;
};

// Normalized density plus its CDF, both on the shared grid. Trapezoid rule
// throughout, matching the piecewise-linear interpolation of quantile/cdf_at.
struct PosteriorCurve {
  ParameterGrid grid;
  std::vector<double> density;
  std::vector<double> cdf;
};

// The revised method's sufficient record: cumulative log-likelihood plus
// cumulative expected Fisher information, one value each per grid point.
struct InferenceState {
  ParameterGrid grid;
  std::vector<double> cum_loglik;
  std::vector<double> cum_fisher;

  explicit InferenceState(const ParameterGrid& g)
      : grid(g),
        cum_loglik(g.num_points, 0.0),
        cum_fisher(g.num_points, 0.0) {}
};

using Experiment = std::pair<Model, Observation>;

LogLikelihoodCurve log_likelihood_curve(const Model& model, const Observation& obs,
                                        const ParameterGrid& grid);

// Multiply in one experiment's likelihood, add its Fisher information.
InferenceState ingest(const InferenceState& state, const Model& model,
                      const Observation& obs);

// Same update with caller-supplied curves (notional observations encoding
// probabilistic prior information enter here).
InferenceState ingest_curves(const InferenceState& state, const LogLikelihoodCurve& loglik,
                             const FisherCurve& fisher);

PriorCurve jeffreys_prior(const FisherCurve& fisher);

// Normalize exp(loglik) * prior by the trapezoid rule.
PosteriorCurve posterior_from(const ParameterGrid& grid, const std::vector<double>& loglik,
                              const std::vector<double>& prior);

// Single application of Bayes' theorem with the accumulated record.
PosteriorCurve posterior_revised(const InferenceState& state);

// Jeffreys prior of the first experiment only, then sequential likelihood
// multiplication; order-dependent whenever informations are non-proportional.
PosteriorCurve posterior_standard_sequential(const std::vector<Experiment>& experiments,
                                             const ParameterGrid& grid);

double quantile(const PosteriorCurve& post, double p);
double cdf_at(const PosteriorCurve& post, double theta);

// Expand [lower, upper] until the shift-normalized combined likelihood at
// both edges falls below 1e-10 of its maximum.
ParameterGrid auto_widen_grid(const std::vector<Experiment>& experiments, double lower,
                              double upper, int num_points);

// Clamped grid for parameters living in (0,1).
ParameterGrid bernoulli_grid(int num_points);

}  // namespace bayup
