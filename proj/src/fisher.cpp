#include "bayup/fisher.hpp"

#include <cmath>
#include <stdexcept>

namespace bayup {

namespace {

void require_open_unit_grid(const ParameterGrid& grid) {
  if (!(grid.lower > 0.0 && grid.upper < 1.0))
    throw std::domain_error("Bernoulli Fisher curves need a grid strictly inside (0,1)");
}

double gaussian_fisher_at(const GaussianTransformModel& m, double theta) {
  const double d = m.transform.deriv(theta);
  return d * d / (m.noise_sd * m.noise_sd);
}

double binomial_fisher_at(const BinomialModel& m, double theta) {
  return static_cast<double>(m.num_trials) / (theta * (1.0 - theta));
}

double negbinom_fisher_at(const NegativeBinomialModel& m, double theta) {
  return static_cast<double>(m.target_count) / (theta * theta * (1.0 - theta));
}

// Negative second derivative of the Gaussian log-likelihood at (x, theta),
// f'(theta)^2/sigma^2 - (x - f(theta)) f''(theta)/sigma^2.
double gaussian_neg_d2(const GaussianTransformModel& m, double x, double theta) {
  const double d1 = m.transform.deriv(theta);
  const double d2 = m.transform.deriv2(theta);
  const double inv_var = 1.0 / (m.noise_sd * m.noise_sd);
  return inv_var * (d1 * d1 - (x - m.transform.value(theta)) * d2);
}

double gaussian_oracle_n(const GaussianTransformModel& m, double theta, int n) {
  std::vector<double> nodes, weights;
  gauss_hermite(n, nodes, weights);
  const double mean = m.transform.value(theta);
  const double scale = std::sqrt(2.0) * m.noise_sd;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += weights[i] * gaussian_neg_d2(m, mean + scale * nodes[i], theta);
  return acc / std::sqrt(M_PI);
}

double gaussian_oracle(const GaussianTransformModel& m, double theta) {
  const double coarse = gaussian_oracle_n(m, theta, 64);
  const double fine = gaussian_oracle_n(m, theta, 128);
  const double denom = std::max(std::abs(fine), 1e-300);
  if (std::abs(fine - coarse) / denom > 1e-6)
    throw std::runtime_error("Gauss-Hermite quadrature did not converge for Fisher oracle");
  return fine;
}

double binomial_oracle(const BinomialModel& m, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  const long long n = m.num_trials;
  const double log_th = std::log(theta);
  const double log_1mth = std::log1p(-theta);
  double acc = 0.0;
  for (long long y = 0; y <= n; ++y) {
    const double log_p = std::lgamma(n + 1.0) - std::lgamma(y + 1.0) -
                         std::lgamma(n - y + 1.0) + y * log_th + (n - y) * log_1mth;
    const double neg_d2 =
        y / (theta * theta) + (n - y) / ((1.0 - theta) * (1.0 - theta));
    acc += std::exp(log_p) * neg_d2;
  }
  return acc;
}

double negbinom_oracle(const NegativeBinomialModel& m, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in (0,1)");
  const long long r = m.target_count;
  const double log_th = std::log(theta);
  const double log_1mth = std::log1p(-theta);
  constexpr long long max_terms = 1'000'000;
  double acc = 0.0;
  double mass = 0.0;
  for (long long k = 0; k < max_terms; ++k) {
    const long long z = r + k;
    const double log_p = std::lgamma(z + 0.0) - std::lgamma(r + 0.0) -
                         std::lgamma(z - r + 1.0) + r * log_th + (z - r) * log_1mth;
    const double p = std::exp(log_p);
    const double neg_d2 =
        r / (theta * theta) + (z - r) / ((1.0 - theta) * (1.0 - theta));
    acc += p * neg_d2;
    mass += p;
    if (1.0 - mass < 1e-12) return acc;
  }
  throw std::runtime_error("negative binomial Fisher summation hit the term ceiling");
}

}  // namespace

double analytic_fisher_at(const Model& model, double theta) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTransformModel>)
          return gaussian_fisher_at(m, theta);
        else if constexpr (std::is_same_v<T, BinomialModel>)
          return binomial_fisher_at(m, theta);
        else
          return negbinom_fisher_at(m, theta);
      },
      model);
}

FisherCurve analytic_fisher(const Model& model, const ParameterGrid& grid) {
  if (is_bernoulli_model(model)) require_open_unit_grid(grid);
  FisherCurve curve{grid, std::vector<double>(grid.num_points)};
  for (int i = 0; i < grid.num_points; ++i)
    curve.values[i] = analytic_fisher_at(model, grid.point(i));
  return curve;
}

FisherCurve combine_fisher(const FisherCurve& a, const FisherCurve& b) {
  require_same_grid(a.grid, b.grid);
  FisherCurve out{a.grid, a.values};
  for (int i = 0; i < a.grid.num_points; ++i) out.values[i] += b.values[i];
  return out;
}

double numeric_fisher_oracle(const Model& model, double theta) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTransformModel>)
          return gaussian_oracle(m, theta);
        else if constexpr (std::is_same_v<T, BinomialModel>)
          return binomial_oracle(m, theta);
        else
          return negbinom_oracle(m, theta);
      },
      model);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on the orthonormal Hermite recurrence (weight exp(-x^2)).
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi_m4 = 0.7511255444649425;  // pi^(-1/4)
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];

    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pi_m4;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace bayup
