#pragma once

#include <vector>

#include "bayup/grid.hpp"
#include "bayup/models.hpp"

namespace bayup {

// Expected Fisher information h(theta) tabulated on a grid.
struct FisherCurve {
  ParameterGrid grid;
  std::vector<double> values;

  static FisherCurve zero(const ParameterGrid& g) {
    return {g, std::vector<double>(g.num_points, 0.0)};
  }
};

// Closed-form per-experiment information, evaluated pointwise.
//   gaussian:  f'(theta)^2 / sigma^2
//   binomial:  n / (theta (1-theta))
//   negbinom:  r / (theta^2 (1-theta))
double analytic_fisher_at(const Model& model, double theta);

FisherCurve analytic_fisher(const Model& model, const ParameterGrid& grid);

// Pointwise sum; information from independent experiments adds.
FisherCurve combine_fisher(const FisherCurve& a, const FisherCurve& b);

// Independent evaluation of E[-d^2 log L / d theta^2] from the defining
// expectation: Gauss-Hermite quadrature for Gaussian models (64 nodes,
// convergence checked against 128), exact summation with tail mass below
// 1e-12 for the discrete families.
double numeric_fisher_oracle(const Model& model, double theta);

// Physicists' Gauss-Hermite rule: integrates f(x) exp(-x^2) over the line.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace bayup
