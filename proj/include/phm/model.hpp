#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "phm/error.hpp"
#include "phm/hazard_models.hpp"
#include "phm/life_model.hpp"
#include "phm/rbd.hpp"

namespace phm::store {

struct BatteryParams {
  hazard::BatteryType type = hazard::BatteryType::kPrimaryCell;
  bool operator==(const BatteryParams&) const = default;
};

struct BearingParams {
  FailureRate base_rate;
  hazard::FactorSet factors;
  bool operator==(const BearingParams&) const = default;
};

struct ElectricalParams {
  hazard::ElectricalKind kind = hazard::ElectricalKind::kCapacitor;
  FailureRate base_rate;
  hazard::FactorSet factors;
  bool operator==(const ElectricalParams&) const = default;
};

/// User-defined part: base rate times named multipliers.
struct CustomParams {
  FailureRate base_rate;
  std::vector<std::pair<std::string, double>> multipliers;
  bool operator==(const CustomParams&) const = default;
};

using ComponentParams = std::variant<BatteryParams, BearingParams, hazard::MotorParams,
                                     ElectricalParams, hazard::RotatingDeviceParams,
                                     CustomParams>;

/// Kind selector as written in documents ("battery", "capacitor", "custom", ...).
std::string kind_name(const ComponentParams& params);

/// Explicit Weibull lifetime for a component. When absent the component is
/// exponential with its calculated rate.
struct WeibullLife {
  double alpha = 1.0;
  double beta = 1.0;
  bool operator==(const WeibullLife&) const = default;
};

struct ComponentSpec {
  std::string name;
  int quantity = 1;
  ComponentParams params;
  hazard::EnvironmentClass environment = hazard::EnvironmentClass::kGroundBenign;
  std::string quality;
  std::optional<WeibullLife> life;
  std::string note;

  bool operator==(const ComponentSpec&) const = default;
};

struct SubModule {
  std::string name;
  std::vector<ComponentSpec> components;
  bool operator==(const SubModule&) const = default;
};

struct Module {
  std::string name;
  std::vector<SubModule> submodules;
  bool operator==(const Module&) const = default;
};

/// Configuration tree over component paths.
struct ConfigNode {
  struct Group {
    rbd::GroupKind kind = rbd::GroupKind::kSeries;
    std::vector<ConfigNode> children;
    bool operator==(const Group&) const;
  };
  std::variant<std::string, Group> node;

  static ConfigNode ref(std::string path) { return {std::move(path)}; }
  static ConfigNode group(rbd::GroupKind kind, std::vector<ConfigNode> children) {
    return {Group{kind, std::move(children)}};
  }
  bool is_ref() const { return std::holds_alternative<std::string>(node); }

  bool operator==(const ConfigNode&) const = default;
};

enum class LifeFamily { kExponential, kWeibull };

struct UnitPreferences {
  std::string speed_unit = "km/h";
  std::string time_unit = "h";
  bool operator==(const UnitPreferences&) const = default;
};

struct RobotModel {
  std::string name;
  std::string note;
  std::vector<Module> modules;
  /// Absent: every component in document order, in series.
  std::optional<ConfigNode> configuration;
  std::vector<std::string> excluded;
  UnitPreferences units;
  LifeFamily life_model_default = LifeFamily::kExponential;
  hazard::FactorLookup lookup;

  bool operator==(const RobotModel&) const = default;

  const ComponentSpec* find(std::string_view path) const;
  /// All component paths in document order.
  std::vector<std::string> component_paths() const;
};

/// "module/submodule/component", with '/' and '\' inside names escaped by '\'.
std::string component_path(std::string_view module, std::string_view submodule,
                           std::string_view component);
/// Inverse of component_path; empty vector when the path is malformed.
std::vector<std::string> split_path(std::string_view path);

/// Factor multipliers applied on top of a model: path -> factor -> multiplier.
using FactorOverrides = std::map<std::string, std::map<std::string, double>>;

/// Whether `factor` can be scaled on a component of this kind.
bool accepts_factor(const ComponentSpec& spec, std::string_view factor);

/// Per-hour failure rate of a single unit of `spec`, with pi_E / pi_Q
/// resolved through `lookup` unless set explicitly, and `overrides`
/// (factor -> multiplier) applied.
FailureRate component_rate(const ComponentSpec& spec, const hazard::FactorLookup& lookup,
                           const std::map<std::string, double>* overrides = nullptr,
                           std::vector<Diagnostic>* warnings = nullptr);

/// Semantic checks: unique paths, complete parameters, references resolve,
/// every component configured exactly once or excluded.
std::vector<Diagnostic> validate_model(const RobotModel& model);

/// Builds the evaluable block tree. Leaf ids are component paths.
rbd::BlockExpr build_block(const RobotModel& model, const FactorOverrides& overrides = {});

/// Parses and validates a model document. Throws SchemaError (with JSON
/// pointer and line) on syntax/schema problems and ValidationError for
/// semantic ones.
RobotModel parse_model(std::string_view text);

/// Canonical document: fixed key order, 2-space indent, every non-integer
/// number in shortest round-trip scientific form, defaults omitted.
std::string serialize_model(const RobotModel& model);

hazard::FactorLookup parse_factor_lookup(std::string_view text);
std::string serialize_factor_lookup(const hazard::FactorLookup& lookup);

/// The bundled OTA inventory: five modules in series, each module's
/// components in series. `parallel_batteries` swaps the 4 batteries for a
/// parallel group of 4 single batteries.
RobotModel ota_example(bool parallel_batteries = false);

/// Loads a document from disk.
RobotModel load_model(const std::string& file);
/// Writes `text` to `file` through a temporary sibling and rename.
void save_atomically(const std::string& file, std::string_view text);
std::string read_file(const std::string& file);

}  // namespace phm::store
