#include "bayup/models.hpp"

#include <cmath>
#include <stdexcept>

namespace bayup {

namespace {
constexpr double log_sqrt_2pi = 0.91893853320467274178;  // log(sqrt(2*pi))

double log_choose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void require_open_unit(double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::domain_error("theta must lie strictly in (0,1) for Bernoulli models");
}
}  // namespace

double Transform::value(double theta) const {
  switch (kind) {
    case TransformKind::identity:
      return theta;
    case TransformKind::cube:
      return theta * theta * theta;
    case TransformKind::power:
      return std::pow(theta, exponent);
    case TransformKind::poly: {
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * theta + *it;
      return v;
    }
  }
  return 0.0;
}

double Transform::deriv(double theta) const {
  switch (kind) {
    case TransformKind::identity:
      return 1.0;
    case TransformKind::cube:
      return 3.0 * theta * theta;
    case TransformKind::power:
      return exponent * std::pow(theta, exponent - 1);
    case TransformKind::poly: {
      double v = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 1;)
        v = v * theta + static_cast<double>(i) * coeffs[i];
      return v;
    }
  }
  return 0.0;
}

double Transform::deriv2(double theta) const {
  switch (kind) {
    case TransformKind::identity:
      return 0.0;
    case TransformKind::cube:
      return 6.0 * theta;
    case TransformKind::power:
      if (exponent < 2) return 0.0;
      return static_cast<double>(exponent) * (exponent - 1) * std::pow(theta, exponent - 2);
    case TransformKind::poly: {
      double v = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 2;)
        v = v * theta + static_cast<double>(i) * static_cast<double>(i - 1) * coeffs[i];
      return v;
    }
  }
  return 0.0;
}

Transform Transform::make_power(int k) {
  if (k < 1) throw std::invalid_argument("power transform exponent must be >= 1");
  return {TransformKind::power, k, {}};
}

Transform Transform::make_poly(std::vector<double> c) {
  if (c.empty()) throw std::invalid_argument("polynomial transform needs coefficients");
  return {TransformKind::poly, 1, std::move(c)};
}

GaussianTransformModel::GaussianTransformModel(Transform t, double sd)
    : transform(std::move(t)), noise_sd(sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("noise_sd must be positive");
}

BinomialModel::BinomialModel(long long n) : num_trials(n) {
  if (n < 1) throw std::invalid_argument("num_trials must be >= 1");
}

NegativeBinomialModel::NegativeBinomialModel(long long r) : target_count(r) {
  if (r < 1) throw std::invalid_argument("target_count must be >= 1");
}

double gaussian_log_likelihood(const GaussianTransformModel& m, const Observation& obs,
                               double theta) {
  if (obs.is_count)
    throw std::invalid_argument("Gaussian model expects a real-valued observation");
  const double resid = obs.real - m.transform.value(theta);
  return -log_sqrt_2pi - std::log(m.noise_sd) - resid * resid / (2.0 * m.noise_sd * m.noise_sd);
}

double binomial_log_pmf(const BinomialModel& m, const Observation& count, double theta) {
  if (!count.is_count) throw std::invalid_argument("binomial model expects a count");
  require_open_unit(theta);
  const long long y = count.count;
  const long long n = m.num_trials;
  if (y < 0 || y > n) throw std::domain_error("binomial count must satisfy 0 <= y <= n");
  return log_choose(n, y) + y * std::log(theta) + (n - y) * std::log1p(-theta);
}

double negbinom_log_pmf(const NegativeBinomialModel& m, const Observation& count,
                        double theta) {
  if (!count.is_count) throw std::invalid_argument("negative binomial model expects a count");
  require_open_unit(theta);
  const long long z = count.count;
  const long long r = m.target_count;
  if (z < r) throw std::domain_error("negative binomial count must satisfy z >= r");
  return log_choose(z - 1, r - 1) + r * std::log(theta) + (z - r) * std::log1p(-theta);
}

double log_likelihood(const Model& model, const Observation& obs, double theta) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTransformModel>)
          return gaussian_log_likelihood(m, obs, theta);
        else if constexpr (std::is_same_v<T, BinomialModel>)
          return binomial_log_pmf(m, obs, theta);
        else
          return negbinom_log_pmf(m, obs, theta);
      },
      model);
}

double transform_derivative(const GaussianTransformModel& m, double theta) {
  return m.transform.deriv(theta);
}

namespace {

Observation sample_gaussian(const GaussianTransformModel& m, double theta, Rng& rng) {
  if (!std::isfinite(theta)) throw std::domain_error("theta must be finite");
  return Observation::real_value(m.transform.value(theta) + m.noise_sd * rng.normal());
}

Observation sample_binomial(const BinomialModel& m, double theta, Rng& rng) {
  require_open_unit(theta);
  long long y = 0;
  for (long long i = 0; i < m.num_trials; ++i)
    if (rng.bernoulli(theta)) ++y;
  return Observation::count_value(y);
}

Observation sample_negbinom(const NegativeBinomialModel& m, double theta, Rng& rng) {
  require_open_unit(theta);
  constexpr long long max_trials = 10'000'000;
  long long hits = 0;
  for (long long z = 1; z <= max_trials; ++z) {
    if (rng.bernoulli(theta)) {
      if (++hits == m.target_count) return Observation::count_value(z);
    }
  }
  throw std::runtime_error("negative binomial sampling exceeded the trial cap");
}

}  // namespace

Observation sample(const Model& model, double theta, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> Observation {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTransformModel>)
          return sample_gaussian(m, theta, rng);
        else if constexpr (std::is_same_v<T, BinomialModel>)
          return sample_binomial(m, theta, rng);
        else
          return sample_negbinom(m, theta, rng);
      },
      model);
}

bool is_bernoulli_model(const Model& model) {
  return !std::holds_alternative<GaussianTransformModel>(model);
}

std::string model_label(const Model& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianTransformModel>)
          return "gaussian";
        else if constexpr (std::is_same_v<T, BinomialModel>)
          return "binomial";
        else
          return "negbinomial";
      },
      model);
}

}  // namespace bayup
