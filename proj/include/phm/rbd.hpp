#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phm/error.hpp"
#include "phm/life_model.hpp"

namespace phm::rbd {

enum class GroupKind { kSeries, kParallel };

/// `quantity` identical, independent copies of one component in series.
struct Leaf {
  std::string component_id;
  int quantity = 1;
  LifeModel model;

  bool operator==(const Leaf&) const = default;
};

class BlockExpr;

struct Group {
  GroupKind kind = GroupKind::kSeries;
  std::vector<BlockExpr> children;

  bool operator==(const Group&) const;
};

/// Series/parallel reliability block diagram. Blocks are statistically
/// independent; parallel redundancy is hot standby (every unit ages from 0).
class BlockExpr {
 public:
  static BlockExpr leaf(std::string component_id, LifeModel model, int quantity = 1);
  static BlockExpr series(std::vector<BlockExpr> children);
  static BlockExpr parallel(std::vector<BlockExpr> children);

  bool is_leaf() const { return std::holds_alternative<Leaf>(node_); }
  const Leaf& as_leaf() const { return std::get<Leaf>(node_); }
  const Group& as_group() const { return std::get<Group>(node_); }
  Leaf& as_leaf() { return std::get<Leaf>(node_); }
  Group& as_group() { return std::get<Group>(node_); }

  /// Calls `fn` for every leaf in depth-first order.
  void for_each_leaf(const std::function<void(const Leaf&)>& fn) const;
  std::size_t leaf_count() const;

  bool operator==(const BlockExpr&) const = default;

 private:
  explicit BlockExpr(std::variant<Leaf, Group> node) : node_(std::move(node)) {}

  std::variant<Leaf, Group> node_;
};

/// Structural and reference checks. Empty when the tree is valid; every
/// diagnostic names the offending node path ("$", "$.children[1]", ...).
/// `resolves` may be empty, in which case references are not checked.
std::vector<Diagnostic> validate_block(
    const BlockExpr& expr,
    const std::function<bool(std::string_view)>& resolves = {});

/// Reliability floor below which the system is treated as failed.
inline constexpr double kFailedReliability = 1e-12;

double system_reliability(const BlockExpr& expr, double t);

/// ln R_sys(t), accurate where R_sys underflows.
double system_log_reliability(const BlockExpr& expr, double t);

/// h(t) = -d/dt ln R_sys(t), per hour. Throws SystemFailedError when
/// R_sys(t) <= 1e-12.
double system_hazard(const BlockExpr& expr, double t);

/// Quantity-weighted sum of rates when the tree is series-only with
/// exponential leaves; nullopt otherwise.
std::optional<double> series_exponential_rate(const BlockExpr& expr);

/// Integral of R_sys over [0, inf) in hours; 1/sum(lambda) for series
/// exponential trees. Throws NumericError if the quadrature budget runs out.
double system_mttf(const BlockExpr& expr);

/// Probability that a failure was caused by each component type.
std::map<std::string, double> failure_attribution(
    const std::map<std::string, std::uint64_t>& counts);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Fraction of `samples` simulated system lifetimes exceeding `t`, with its
/// binomial standard error. Leaf lifetimes come from inverse-CDF sampling;
/// series takes the minimum, parallel the maximum. Deterministic per seed.
MonteCarloEstimate mc_reliability_oracle(const BlockExpr& expr, double t,
                                         std::uint64_t samples, std::uint64_t seed);

}  // namespace phm::rbd
