#pragma once

// Random valid robot models and single-point schema mutations of their
// documents.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "phm/model.hpp"

namespace phm::testing {

class ModelFuzzer {
 public:
  explicit ModelFuzzer(std::uint64_t seed) : rng_(seed) {}

  store::RobotModel random_model() {
    using namespace store;
    RobotModel m;
    m.name = name();
    if (coin()) m.note = "fuzzed " + name();
    if (coin(0.2)) m.units = {"m/s", "s"};
    if (coin(0.3)) {
      m.lookup.environment[hazard::EnvironmentClass::kGroundMobile] = positive();
      m.lookup.quality["capacitor"]["M"] = positive();
    }
    const int modules = 1 + pick(3);
    for (int mi = 0; mi < modules; ++mi) {
      Module mod{name() + std::to_string(mi), {}};
      const int subs = 1 + pick(3);
      for (int si = 0; si < subs; ++si) {
        SubModule sub{name() + std::to_string(si), {}};
        const int comps = 1 + pick(4);
        for (int ci = 0; ci < comps; ++ci) sub.components.push_back(component(ci));
        mod.submodules.push_back(std::move(sub));
      }
      m.modules.push_back(std::move(mod));
    }
    auto paths = m.component_paths();
    if (coin(0.3) && paths.size() > 1) {
      m.excluded.push_back(paths.back());
      paths.pop_back();
    }
    if (coin(0.6) || !m.excluded.empty()) m.configuration = config(paths);
    return m;
  }

  /// Applies one schema-breaking edit (delete a required key, rename a key,
  /// or change a scalar's type) at a random site of a model document.
  std::string mutate(const std::string& text, std::string* description = nullptr) {
    auto doc = nlohmann::ordered_json::parse(text);
    std::vector<Site> sites;
    collect(doc, "", 0, sites);
    const Site& s = sites[rng_() % sites.size()];
    auto& parent = doc.at(nlohmann::ordered_json::json_pointer(s.parent));
    std::string what;
    switch (s.action) {
      case Action::kDelete:
        parent.erase(s.key);
        what = "delete " + s.parent + "/" + s.key;
        break;
      case Action::kRename: {
        auto value = parent[s.key];
        parent.erase(s.key);
        parent[s.key + "_renamed"] = value;
        what = "rename " + s.parent + "/" + s.key;
        break;
      }
      case Action::kRetype: {
        auto& v = parent[s.key];
        v = v.is_string() ? nlohmann::ordered_json(12345) : nlohmann::ordered_json("not-a-number");
        what = "retype " + s.parent + "/" + s.key;
        break;
      }
    }
    if (description) *description = what;
    return doc.dump(2);
  }

  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

 private:
  enum class Action { kDelete, kRename, kRetype };
  struct Site {
    std::string parent;  // JSON pointer of the containing object
    std::string key;
    Action action;
  };

  static bool required(const std::string& key) {
    static const std::vector<std::string> keys = {
        "schema", "name", "modules", "submodules", "components", "kind", "quantity", "params",
        "value", "unit", "base_rate", "battery_type", "lambda1", "lambda2", "A", "B", "alphaB",
        "alphaW", "family", "alpha", "beta", "ref", "series", "parallel"};
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) out += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
    return out;
  }

  // `free_levels`: how many levels below hold user-chosen key names
  // (multiplier names, quality families and designators); renaming or
  // deleting those is not a schema breach.
  void collect(const nlohmann::ordered_json& node, const std::string& ptr, int free_levels,
               std::vector<Site>& out) {
    if (node.is_array()) {
      for (std::size_t i = 0; i < node.size(); ++i) {
        collect(node[i], ptr + "/" + std::to_string(i), 0, out);
      }
      return;
    }
    if (!node.is_object()) return;
    for (const auto& [key, value] : node.items()) {
      if (free_levels == 0) {
        if (required(key)) out.push_back({ptr, key, Action::kDelete});
        out.push_back({ptr, key, Action::kRename});
      }
      if (value.is_string() || value.is_number()) out.push_back({ptr, key, Action::kRetype});
      int below = free_levels > 0 ? free_levels - 1 : 0;
      if (free_levels == 0 && key == "multipliers") below = 1;
      if (free_levels == 0 && key == "quality" && ptr.ends_with("/factor_lookup")) below = 2;
      collect(value, ptr + "/" + escape(key), below, out);
    }
  }

  std::string name() {
    static const char* parts[] = {"Drive", "Sensor", "Board", "Arm", "Lidar", "Cell", "a/b", "x\\y", "Ünï"};
    return parts[rng_() % 9];
  }

  double positive() {
    // Arbitrary doubles across many decades, to exercise shortest round-trip output.
    return std::uniform_real_distribution<double>(1.0, 10.0)(rng_) *
           std::pow(10.0, std::uniform_int_distribution<int>(-9, 2)(rng_));
  }

  FailureRate rate() {
    return FailureRate(positive(), coin() ? RateUnit::kPerHour : RateUnit::kPerMillionHours);
  }

  store::ComponentSpec component(int index) {
    using namespace store;
    ComponentSpec c;
    c.name = name() + "#" + std::to_string(index);
    c.quantity = 1 + pick(5);
    switch (pick(6)) {
      case 0:
        c.params = BatteryParams{static_cast<hazard::BatteryType>(pick(3))};
        break;
      case 1: {
        BearingParams b{rate(), {}};
        if (coin()) b.factors.set("CY", positive());
        c.params = b;
        break;
      }
      case 2: {
        hazard::MotorParams m;
        m.base_rate = rate();
        m.service_factor = positive();
        m.brush_count = pick(3);
        if (coin()) m.winding_rate = rate();
        c.params = m;
        break;
      }
      case 3: {
        ElectricalParams e{static_cast<hazard::ElectricalKind>(pick(8)), rate(), {}};
        const auto& names = hazard::required_factors(e.kind);
        if (coin()) e.factors.set(names[rng_() % names.size()], positive());
        c.params = e;
        break;
      }
      case 4:
        c.params = hazard::RotatingDeviceParams{positive(), positive(), positive(),
                                                positive(), positive(), positive()};
        break;
      default: {
        CustomParams p{rate(), {}};
        if (coin()) p.multipliers.emplace_back("stress", positive());
        c.params = p;
        break;
      }
    }
    if (coin(0.3)) c.environment = static_cast<hazard::EnvironmentClass>(pick(3));
    if (coin(0.3)) c.quality = "M";
    if (coin(0.2)) c.life = WeibullLife{positive() * 100, 0.5 + pick(3)};
    if (coin(0.2)) c.note = "n";
    return c;
  }

  store::ConfigNode config(std::vector<std::string> paths) {
    std::shuffle(paths.begin(), paths.end(), rng_);
    return group(paths, 0, paths.size(), 0);
  }

  store::ConfigNode group(const std::vector<std::string>& paths, std::size_t a, std::size_t b, int depth) {
    if (b - a == 1 && depth > 0) return store::ConfigNode::ref(paths[a]);
    std::vector<store::ConfigNode> children;
    std::size_t i = a;
    while (i < b) {
      const std::size_t len = std::min<std::size_t>(b - i, 1 + pick(3));
      children.push_back(group(paths, i, i + len, depth + 1));
      i += len;
    }
    return store::ConfigNode::group(coin() ? rbd::GroupKind::kSeries : rbd::GroupKind::kParallel,
                                    std::move(children));
  }

  std::mt19937_64 rng_;
};

}  // namespace phm::testing
