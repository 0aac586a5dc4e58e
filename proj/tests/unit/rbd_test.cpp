#include <gtest/gtest.h>

#include <cmath>

#include "phm/error.hpp"
#include "phm/rbd.hpp"
#include "random_trees.hpp"

namespace phm::rbd {
namespace {

BlockExpr exp_leaf(const std::string& id, double lambda, int q = 1) {
  return BlockExpr::leaf(id, LifeModel::exponential_per_hour(lambda), q);
}

// Leaf whose reliability at t = 1 is exactly `r`.
BlockExpr leaf_with_r(const std::string& id, double r) { return exp_leaf(id, -std::log(r)); }

TEST(ValidateBlock, Cases) {
  EXPECT_TRUE(validate_block(exp_leaf("a", 1e-3)).empty());
  const auto empty = validate_block(BlockExpr::series({}));
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0].message.rfind("empty group", 0), 0u);
  const auto tree = BlockExpr::series({exp_leaf("a", 1e-3), exp_leaf("ghost", 1e-3)});
  const auto unresolved = validate_block(tree, [](std::string_view id) { return id == "a"; });
  ASSERT_EQ(unresolved.size(), 1u);
  EXPECT_EQ(unresolved[0].path, "$.children[1]");
  EXPECT_NE(unresolved[0].message.find("unresolved reference"), std::string::npos);
}

TEST(SystemReliability, SeriesAndParallel) {
  const auto a = leaf_with_r("a", 0.9);
  const auto b = leaf_with_r("b", 0.8);
  EXPECT_NEAR(system_reliability(BlockExpr::series({a, b}), 1.0), 0.72, 1e-15);
  EXPECT_NEAR(system_reliability(BlockExpr::parallel({a, b}), 1.0), 0.98, 1e-15);
  EXPECT_NEAR(system_reliability(BlockExpr::series({exp_leaf("a", 1e-3), exp_leaf("b", 1e-3)}), 500.0),
              std::exp(-1.0), 1e-15);
}

TEST(SystemReliability, InvalidTreeThrows) {
  EXPECT_THROW(system_reliability(BlockExpr::parallel({}), 1.0), ValidationError);
}

TEST(SystemHazard, SeriesExponentialSum) {
  const auto tree = BlockExpr::series({exp_leaf("a", 1e-3, 2), exp_leaf("b", 5e-4)});
  for (double t : {0.0, 10.0, 1e4}) EXPECT_EQ(system_hazard(tree, t), 2.5e-3);
  EXPECT_EQ(series_exponential_rate(tree).value(), 2.5e-3);
}

TEST(SystemHazard, WeibullLeaf) {
  EXPECT_NEAR(system_hazard(BlockExpr::leaf("w", LifeModel::weibull(100.0, 2.0)), 100.0), 0.02, 1e-15);
}

TEST(SystemHazard, TwoUnitParallel) {
  const auto tree = BlockExpr::parallel({exp_leaf("a", 1e-3), exp_leaf("b", 1e-3)});
  // 2 lambda (e1 - e2) / (2 e1 - e2) at t = 1000, 50-digit reference.
  EXPECT_NEAR(system_hazard(tree, 1000.0), 7.7460032643943592e-4, 1e-6 * 7.746e-4);
}

TEST(SystemHazard, MatchesFiniteDifferenceOnRandomTrees) {
  testing::TreeGenerator gen(99);
  for (int i = 0; i < 40; ++i) {
    const auto tree = gen.random_tree(6);
    const double t = testing::time_at_reliability(tree, 0.5);
    const double h = 1e-5 * t;
    const double fd = -(system_log_reliability(tree, t + h) - system_log_reliability(tree, t - h)) / (2 * h);
    EXPECT_NEAR(system_hazard(tree, t), fd, 1e-6 * std::abs(fd));
  }
}

TEST(SystemHazard, FailedSystemThrows) {
  EXPECT_THROW(system_hazard(exp_leaf("a", 1.0), 100.0), SystemFailedError);
}

TEST(SystemMttf, Cases) {
  EXPECT_EQ(system_mttf(BlockExpr::series({exp_leaf("a", 1e-3), exp_leaf("b", 1e-3)})), 500.0);
  EXPECT_NEAR(system_mttf(BlockExpr::parallel({exp_leaf("a", 1e-3), exp_leaf("b", 1e-3)})), 1500.0,
              1500.0 * 1e-8);
  EXPECT_EQ(system_mttf(exp_leaf("battery", 2e-8)), 5e7);
}

TEST(FailureAttribution, Ratios) {
  const auto p = failure_attribution({{"motor", 3}, {"battery", 1}});
  EXPECT_EQ(p.at("motor"), 0.75);
  EXPECT_EQ(p.at("battery"), 0.25);
  EXPECT_EQ(failure_attribution({{"x", 5}}).at("x"), 1.0);
  const auto q = failure_attribution({{"a", 1}, {"b", 1}, {"c", 2}});
  EXPECT_EQ(q.at("c"), 0.5);
  EXPECT_THROW(failure_attribution({}), DomainError);
  EXPECT_THROW(failure_attribution({{"a", 0}}), DomainError);
}

TEST(MonteCarlo, MatchesClosedForms) {
  const auto single = mc_reliability_oracle(exp_leaf("a", 1e-3), 1000.0, 100000, 1);
  EXPECT_LT(std::abs(single.estimate - std::exp(-1.0)), 3 * single.std_error);
  const auto tree = BlockExpr::parallel({exp_leaf("a", 1e-3), exp_leaf("b", 1e-3)});
  const auto par = mc_reliability_oracle(tree, 1000.0, 100000, 2);
  const double exact = 1 - std::pow(1 - std::exp(-1.0), 2);
  EXPECT_LT(std::abs(par.estimate - exact), 3 * par.std_error);
}

TEST(MonteCarlo, DeterministicPerSeed) {
  const auto tree = BlockExpr::series({exp_leaf("a", 1e-3), BlockExpr::leaf("w", LifeModel::weibull(900, 2))});
  const auto a = mc_reliability_oracle(tree, 300.0, 100000, 42);
  const auto b = mc_reliability_oracle(tree, 300.0, 100000, 42);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_THROW(mc_reliability_oracle(tree, 300.0, 10, 42), DomainError);
}

TEST(Structure, AddingChildren) {
  testing::TreeGenerator gen(3);
  for (int i = 0; i < 30; ++i) {
    const auto a = gen.random_tree(4);
    const auto b = gen.random_tree(3);
    const double t = testing::time_at_reliability(a, 0.6);
    const double ra = system_reliability(a, t);
    EXPECT_LE(system_reliability(BlockExpr::series({a, b}), t), ra);
    EXPECT_GE(system_reliability(BlockExpr::parallel({a, b}), t), ra);
  }
}

TEST(Structure, NonIncreasingFromOne) {
  testing::TreeGenerator gen(4);
  for (int i = 0; i < 20; ++i) {
    const auto tree = gen.random_tree(6);
    EXPECT_EQ(system_reliability(tree, 0.0), 1.0);
    double previous = 1.0;
    for (double t = 1.0; t < 1e5; t *= 1.7) {
      const double r = system_reliability(tree, t);
      EXPECT_LE(r, previous);
      previous = r;
    }
  }
}

}  // namespace
}  // namespace phm::rbd

namespace phm::rbd {
namespace {

TEST(SystemReliability, ParallelKeepsTinyReliabilities) {
  // A lone child at R ~ 1e-17 must not round to zero through 1 - (1 - R).
  const auto child = BlockExpr::leaf("a", LifeModel::exponential_per_hour(1e-3));
  const double t = 39000.0;
  const auto wrapped = BlockExpr::parallel({child});
  EXPECT_NEAR(system_reliability(wrapped, t), std::exp(-39.0), 1e-12 * std::exp(-39.0));
  EXPECT_NEAR(system_log_reliability(wrapped, t), -39.0, 1e-12);
}

}  // namespace
}  // namespace phm::rbd
