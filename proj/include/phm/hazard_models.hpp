#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phm/error.hpp"
#include "phm/failure_rate.hpp"

namespace phm::hazard {

enum class EnvironmentClass { kGroundBenign, kGroundFixed, kGroundMobile };

std::string_view to_string(EnvironmentClass env);
EnvironmentClass parse_environment(std::string_view text);

/// Electrical part families with a multiplicative handbook formula.
enum class ElectricalKind {
  kCapacitor,
  kDiode,
  kInductor,
  kFuse,
  kResistor,
  kConnectorGeneral,
  kConnectorSocket,
  kQuartzCrystal,
};

std::string_view to_string(ElectricalKind kind);
std::optional<ElectricalKind> parse_electrical_kind(std::string_view text);

/// Factor names taking part in the product for `kind`, in formula order.
const std::vector<std::string>& required_factors(ElectricalKind kind);

/// Factor names of the bearing formula, in formula order.
const std::vector<std::string>& bearing_factors();

bool is_electrical_factor(std::string_view name);
bool is_mechanical_factor(std::string_view name);

/// Named multipliers (pi factors for electrical parts, C factors for
/// mechanical ones). Unspecified factors read as 1.0; every stored value is
/// positive and finite.
class FactorSet {
 public:
  FactorSet() = default;
  FactorSet(std::initializer_list<std::pair<const std::string, double>> init);

  /// Throws ValidationError for non-positive/non-finite values or names
  /// outside the recognized vocabulary.
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  /// Only explicitly set factors; defaults are not materialized.
  const std::map<std::string, double>& explicit_values() const { return values_; }

  bool operator==(const FactorSet&) const = default;

 private:
  std::map<std::string, double> values_;
};

/// Electric motor parameters; rates are converted to per-million-hours.
struct MotorParams {
  FailureRate base_rate;
  double service_factor = 1.0;
  FailureRate winding_rate;
  int brush_count = 0;
  FailureRate armature_shaft_rate;
  FailureRate bearing_rate;
  FailureRate gear_rate;
  FailureRate capacitor_rate;

  bool operator==(const MotorParams&) const = default;
};

/// Per-brush failure rate, failures per 10^6 hours.
inline constexpr double kBrushRate = 3.2;
/// Stator housing failure rate, failures per 10^6 hours.
inline constexpr double kStatorRate = 0.001;

struct RotatingDeviceParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a = 1.0;
  double b = 1.0;
  double alpha_bearing = 1.0;  // hours
  double alpha_winding = 1.0;  // hours

  bool operator==(const RotatingDeviceParams&) const = default;
};

enum class BatteryType { kPrimaryCell, kNiCd, kLiIon };

std::string_view to_string(BatteryType type);
BatteryType parse_battery_type(std::string_view text);
/// lambda_0 of the battery table (failures per 10^9 hours).
int battery_lambda0(BatteryType type);

/// lambda_b times the kind's factor product, in per-million-hours. Factors
/// that do not belong to `kind` are ignored; each one ignored is reported in
/// `warnings` when given.
FailureRate factor_product_rate(ElectricalKind kind, const FailureRate& base,
                                const FactorSet& factors,
                                std::vector<Diagnostic>* warnings = nullptr);

/// String-keyed overload; unknown kinds raise ValidationError.
FailureRate factor_product_rate(std::string_view kind, const FailureRate& base,
                                const FactorSet& factors,
                                std::vector<Diagnostic>* warnings = nullptr);

/// lambda_BE,B * C_Y * C_R * C_V * C_CW * C_t * C_SF * C_C, per-million-hours.
FailureRate bearing_rate(const FailureRate& base, const FactorSet& factors);

/// Sum of motor part rates, per-million-hours.
FailureRate motor_rate(const MotorParams& params);

/// lambda_0 * 10^-9, per hour.
FailureRate battery_rate(BatteryType type);

/// [lambda1 / (A alpha_B) + lambda2 / (B alpha_W)] * 10^6, per-million-hours.
FailureRate rotating_device_rate(const RotatingDeviceParams& params);

/// base * product(multipliers), in the unit of `base`.
FailureRate custom_rate(const FailureRate& base,
                        const std::vector<std::pair<std::string, double>>& multipliers);

/// User-editable mapping from environment class and quality designator to
/// pi_E / pi_Q. Anything not listed maps to 1.0.
struct FactorLookup {
  std::map<EnvironmentClass, double> environment;
  /// part family (e.g. "capacitor") -> designator -> pi_Q
  std::map<std::string, std::map<std::string, double>> quality;

  double pi_e(EnvironmentClass env) const;
  double pi_q(std::string_view family, std::string_view designator) const;

  bool operator==(const FactorLookup&) const = default;
};

}  // namespace phm::hazard
