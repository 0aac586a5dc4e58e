#pragma once

#include <variant>

#include "phm/failure_rate.hpp"

namespace phm {

/// Constant hazard law.
struct Exponential {
  FailureRate lambda;

  bool operator==(const Exponential&) const = default;
};

/// Two-parameter Weibull law: characteristic life alpha (hours), shape beta.
struct Weibull {
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const Weibull&) const = default;
};

/// Lifetime law of a single block. Construct through the factories, which
/// reject non-positive or non-finite parameters.
class LifeModel {
 public:
  using Law = std::variant<Exponential, Weibull>;

  static LifeModel exponential(FailureRate lambda);
  static LifeModel exponential_per_hour(double lambda) {
    return exponential(FailureRate::hourly(lambda));
  }
  static LifeModel weibull(double alpha, double beta);

  const Law& law() const { return law_; }
  bool is_exponential() const { return std::holds_alternative<Exponential>(law_); }
  /// Constant hazard in per-hour; only meaningful for exponential models.
  double rate_per_hour() const;

  bool operator==(const LifeModel&) const = default;

 private:
  explicit LifeModel(Law law) : law_(law) {}

  Law law_;
};

/// Density f, cumulative failure F, reliability R and hazard h at one time.
///
/// For a Weibull model with beta < 1 evaluated at t = 0 the hazard and the
/// density diverge; both are reported as +infinity rather than an error so
/// that analysis loops may sample t = 0.
struct LifeMetrics {
  double density = 0.0;
  double unreliability = 0.0;
  double reliability = 1.0;
  double hazard = 0.0;
};

/// Evaluates all four metrics at `t` hours. Throws DomainError for negative
/// or non-finite t.
LifeMetrics eval_life(const LifeModel& model, double t);

/// ln R(t). Exact for both families (no exp/log round trip), so it stays
/// meaningful far out in the tail where R underflows.
double log_reliability(const LifeModel& model, double t);

/// Mean time to failure in hours: 1/lambda or alpha * Gamma((1 + beta) / beta).
double mttf(const LifeModel& model);

/// Gamma function on x > 0, better than 1e-13 relative on (0, 50].
double gamma_fn(double x);

/// Time at which R(t) = probability, for inverse-CDF sampling.
double inverse_reliability(const LifeModel& model, double probability);

}  // namespace phm
