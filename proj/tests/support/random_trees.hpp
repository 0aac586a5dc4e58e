#pragma once

// Seeded generators shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "phm/rbd.hpp"

namespace phm::testing {

class TreeGenerator {
 public:
  explicit TreeGenerator(std::uint64_t seed) : rng_(seed) {}

  LifeModel random_model() {
    if (coin(0.5)) {
      // lambda in [1e-4, 1e-2] per hour, log-uniform.
      return LifeModel::exponential_per_hour(std::pow(10.0, uniform(-4.0, -2.0)));
    }
    return LifeModel::weibull(std::pow(10.0, uniform(1.5, 3.5)), uniform(0.5, 3.5));
  }

  /// Tree with at most `max_leaves` leaves, mixed series/parallel groups.
  rbd::BlockExpr random_tree(int max_leaves) {
    const int leaves = 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(max_leaves));
    return build(leaves, 0);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  rbd::BlockExpr build(int leaves, int depth) {
    if (leaves == 1 && (depth > 0 || coin(0.7))) {
      const int quantity = coin(0.2) ? 2 + static_cast<int>(rng_() % 2) : 1;
      return rbd::BlockExpr::leaf("c" + std::to_string(next_id_++), random_model(), quantity);
    }
    // Split the leaves over 1..leaves children (a single child is allowed).
    const int children = leaves == 1 ? 1 : 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(std::min(leaves, 3)));
    std::vector<int> counts(children, 1);
    for (int extra = leaves - children; extra > 0; --extra) counts[rng_() % counts.size()]++;
    std::vector<rbd::BlockExpr> kids;
    for (int c : counts) kids.push_back(build(c, depth + 1));
    return coin(0.5) ? rbd::BlockExpr::series(std::move(kids))
                     : rbd::BlockExpr::parallel(std::move(kids));
  }

  std::mt19937_64 rng_;
  int next_id_ = 0;
};

/// Time at which R_sys(t) == target, by bisection on ln R.
inline double time_at_reliability(const rbd::BlockExpr& tree, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (rbd::system_reliability(tree, hi) > target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rbd::system_reliability(tree, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace phm::testing
