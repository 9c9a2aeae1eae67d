#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bayup/rng.hpp"

namespace bayup {

enum class TransformKind { identity, cube, power, poly };

// Smooth monotone-enough transform f(theta) with exact first and second
// derivatives. A closed enumeration keeps Fisher terms analytic.
struct Transform {
  TransformKind kind = TransformKind::identity;
  int exponent = 1;                 // power kind
  std::vector<double> coeffs;       // poly kind, ascending order

  double value(double theta) const;
  double deriv(double theta) const;
  double deriv2(double theta) const;

  static Transform make_identity() { return {}; }
  static Transform make_cube() { return {TransformKind::cube, 3, {}}; }
  static Transform make_power(int k);
  static Transform make_poly(std::vector<double> c);
};

// x = f(theta) + e, e ~ N(0, sigma), sigma known
struct GaussianTransformModel {
  Transform transform;
  double noise_sd;

  GaussianTransformModel(Transform t, double sd);
};

// counted outcomes y in n Bernoulli trials; theta is the probability of
// the counted outcome
struct BinomialModel {
  long long num_trials;

  explicit BinomialModel(long long n);
};

// trials z until r counted outcomes occur
struct NegativeBinomialModel {
  long long target_count;

  explicit NegativeBinomialModel(long long r);
};

using Model = std::variant<GaussianTransformModel, BinomialModel, NegativeBinomialModel>;

struct Observation {
  bool is_count = false;
  double real = 0.0;
  long long count = 0;

  static Observation real_value(double x) { return {false, x, 0}; }
  static Observation count_value(long long c) { return {true, 0.0, c}; }
};

double gaussian_log_likelihood(const GaussianTransformModel& m, const Observation& obs,
                               double theta);
double binomial_log_pmf(const BinomialModel& m, const Observation& count, double theta);
double negbinom_log_pmf(const NegativeBinomialModel& m, const Observation& count,
                        double theta);

// dispatches to the family-specific evaluator
double log_likelihood(const Model& model, const Observation& obs, double theta);

double transform_derivative(const GaussianTransformModel& m, double theta);

Observation sample(const Model& model, double theta, Rng& rng);

bool is_bernoulli_model(const Model& model);

std::string model_label(const Model& model);

}  // namespace bayup
