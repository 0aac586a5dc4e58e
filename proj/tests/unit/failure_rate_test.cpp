#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "phm/error.hpp"
#include "phm/failure_rate.hpp"

namespace phm {
namespace {

TEST(FailureRate, ConvertsMillionHoursToHourly) {
  const auto r = convert_rate(FailureRate::per_million_hours(9.36), RateUnit::kPerHour);
  EXPECT_EQ(r.unit(), RateUnit::kPerHour);
  EXPECT_EQ(r.value(), 9.36e-6);
}

TEST(FailureRate, ConvertsHourlyToMillionHours) {
  const auto r = convert_rate(FailureRate::hourly(2.0e-8), RateUnit::kPerMillionHours);
  EXPECT_EQ(r.value(), 0.02);
  EXPECT_EQ(convert_rate(FailureRate::hourly(0.0), RateUnit::kPerMillionHours).value(), 0.0);
}

TEST(FailureRate, SameUnitConversionIsIdentity) {
  const auto r = FailureRate::per_million_hours(3.2);
  EXPECT_EQ(convert_rate(r, RateUnit::kPerMillionHours), r);
}

TEST(FailureRate, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mantissa(1.0, 10.0);
  std::uniform_int_distribution<int> exponent(-14, 4);
  for (int i = 0; i < 20000; ++i) {
    const double v = mantissa(rng) * std::pow(10.0, exponent(rng));
    for (auto unit : {RateUnit::kPerHour, RateUnit::kPerMillionHours}) {
      const FailureRate r(v, unit);
      const auto other = unit == RateUnit::kPerHour ? RateUnit::kPerMillionHours : RateUnit::kPerHour;
      const auto back = convert_rate(convert_rate(r, other), unit);
      ASSERT_EQ(back.value(), v) << v;
    }
  }
}

TEST(FailureRate, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(FailureRate::hourly(-1e-9), ValidationError);
  EXPECT_THROW(FailureRate::hourly(std::numeric_limits<double>::quiet_NaN()), ValidationError);
  EXPECT_THROW(FailureRate::hourly(std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(FailureRate, ParsesUnitNames) {
  EXPECT_EQ(parse_rate_unit("per_hour"), RateUnit::kPerHour);
  EXPECT_EQ(parse_rate_unit("per_million_hours"), RateUnit::kPerMillionHours);
  EXPECT_THROW(parse_rate_unit("per_day"), ValidationError);
}

TEST(FailureRate, ScaledKeepsUnit) {
  const auto r = FailureRate::per_million_hours(0.5).scaled(2.0);
  EXPECT_EQ(r.unit(), RateUnit::kPerMillionHours);
  EXPECT_EQ(r.value(), 1.0);
  EXPECT_DOUBLE_EQ(r.per_hour(), 1e-6);
}

}  // namespace
}  // namespace phm
