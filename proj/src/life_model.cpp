#include "phm/life_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "phm/error.hpp"
#include "phm/format.hpp"

namespace phm {

namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("time must be finite and non-negative, got " + format_number(t));
  }
}

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_gamma(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::exp((z + 0.5) * std::log(t) - t) * series;
}

}  // namespace

LifeModel LifeModel::exponential(FailureRate lambda) {
  if (!(lambda.per_hour() > 0.0)) {
    throw ValidationError("", "exponential rate must be positive");
  }
  return LifeModel(Exponential{lambda});
}

LifeModel LifeModel::weibull(double alpha, double beta) {
  std::vector<Diagnostic> problems;
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    problems.push_back({"alpha", "Weibull alpha must be positive and finite"});
  }
  if (!std::isfinite(beta) || beta <= 0.0) {
    problems.push_back({"beta", "Weibull beta must be positive and finite"});
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return LifeModel(Weibull{alpha, beta});
}

double LifeModel::rate_per_hour() const {
  if (const auto* e = std::get_if<Exponential>(&law_)) return e->lambda.per_hour();
  return std::numeric_limits<double>::quiet_NaN();
}

LifeMetrics eval_life(const LifeModel& model, double t) {
  require_time(t);
  LifeMetrics m;
  if (const auto* e = std::get_if<Exponential>(&model.law())) {
    const double lambda = e->lambda.per_hour();
    const double x = lambda * t;
    m.reliability = std::exp(-x);
    m.unreliability = -std::expm1(-x);
    m.hazard = lambda;
    m.density = lambda * m.reliability;
    return m;
  }
  const auto& w = std::get<Weibull>(model.law());
  if (t == 0.0) {
    if (w.beta < 1.0) {
      m.hazard = m.density = std::numeric_limits<double>::infinity();
    } else if (w.beta == 1.0) {
      m.hazard = m.density = 1.0 / w.alpha;
    }
    return m;
  }
  const double z = t / w.alpha;
  const double zb = std::pow(z, w.beta);
  m.reliability = std::exp(-zb);
  m.unreliability = -std::expm1(-zb);
  m.hazard = (w.beta / w.alpha) * std::pow(z, w.beta - 1.0);
  m.density = m.hazard * m.reliability;
  return m;
}

double log_reliability(const LifeModel& model, double t) {
  require_time(t);
  if (const auto* e = std::get_if<Exponential>(&model.law())) {
    return -e->lambda.per_hour() * t;
  }
  const auto& w = std::get<Weibull>(model.law());
  return -std::pow(t / w.alpha, w.beta);
}

double mttf(const LifeModel& model) {
  if (const auto* e = std::get_if<Exponential>(&model.law())) {
    return 1.0 / e->lambda.per_hour();
  }
  const auto& w = std::get<Weibull>(model.law());
  return w.alpha * gamma_fn((1.0 + w.beta) / w.beta);
}

double gamma_fn(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("gamma_fn requires x > 0, got " + format_number(x));
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  return lanczos_gamma(x);
}

double inverse_reliability(const LifeModel& model, double probability) {
  if (!(probability > 0.0 && probability <= 1.0)) {
    throw DomainError("reliability level must lie in (0, 1]");
  }
  const double cumulative_hazard = -std::log(probability);
  if (const auto* e = std::get_if<Exponential>(&model.law())) {
    return cumulative_hazard / e->lambda.per_hour();
  }
  const auto& w = std::get<Weibull>(model.law());
  return w.alpha * std::pow(cumulative_hazard, 1.0 / w.beta);
}

}  // namespace phm
