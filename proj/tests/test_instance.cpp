#include <gtest/gtest.h>

#include <random>

#include "minrate/instance.hpp"
#include "support.hpp"

using namespace minrate;
using namespace minrate::testing;

namespace {

bool has_violation(const std::vector<Violation>& vs, const std::string& what) {
  for (const auto& v : vs)
    if (v.what == what) return true;
  return false;
}

}  // namespace

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("17/8"), Rational(17) / 8);
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("2.5"), Rational(5) / 2);
  EXPECT_EQ(parse_rational("6/4"), Rational(3) / 2);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_EQ(to_string(Rational(17) / 8), "17/8");
  EXPECT_EQ(to_decimal(Rational(17) / 8), "2.125");
  EXPECT_EQ(to_decimal(Rational(1) / 3), "0.333333333333");
}

TEST(Validate, WorkedExampleIsOk) { EXPECT_TRUE(validate(worked_example()).empty()); }

TEST(Validate, SpeedsNotIncreasing) {
  Instance in;
  in.profile = SpeedProfile({Rational(2), Rational(1)}, {Rational(1), Rational(4)});
  EXPECT_TRUE(has_violation(validate(in), "speeds not increasing"));
}

TEST(Validate, SlopesNotStrictlyIncreasing) {
  Instance in;
  in.profile = SpeedProfile({Rational(1), Rational(2), Rational(3)}, {Rational(1), Rational(2), Rational(3)});
  EXPECT_TRUE(has_violation(validate(in), "slopes not strictly increasing"));
}

TEST(Validate, JobsAndIds) {
  Instance in = worked_example();
  in.jobs.push_back({1, Rational(3), Rational(2), Rational(0)});
  const auto vs = validate(in);
  EXPECT_TRUE(has_violation(vs, "duplicate job id"));
  EXPECT_TRUE(has_violation(vs, "release not before deadline"));
  EXPECT_TRUE(has_violation(vs, "work not positive"));
  // Overloaded jobs are representable; infeasibility is detected later.
  Instance heavy = single_job(Rational(0), Rational(1), Rational(100));
  EXPECT_TRUE(validate(heavy).empty());
}

TEST(DeltaSlopes, Examples) {
  EXPECT_EQ(delta_slopes(two_speed_profile()), (std::vector<Rational>{Rational(1), Rational(3)}));
  EXPECT_EQ(delta_slopes(SpeedProfile({Rational(1)}, {Rational(5)})), std::vector<Rational>{Rational(5)});
  const SpeedProfile four({Rational(2), Rational(5), Rational(10), Rational(15)},
                          {Rational(2), Rational(8), Rational(28), Rational(68)});
  EXPECT_EQ(delta_slopes(four), (std::vector<Rational>{Rational(1), Rational(2), Rational(4), Rational(8)}));
}

TEST(WellSeparation, Constant) {
  EXPECT_EQ(well_separation_constant(two_speed_profile()), Rational(3));
  const SpeedProfile four({Rational(2), Rational(5), Rational(10), Rational(15)},
                          {Rational(2), Rational(8), Rational(28), Rational(68)});
  EXPECT_EQ(well_separation_constant(four), Rational(2));
  EXPECT_EQ(well_separation_constant(SpeedProfile({Rational(1)}, {Rational(5)})), std::nullopt);
  // Delta = (1, 2, 5)
  const SpeedProfile bad({Rational(1), Rational(2), Rational(3)}, {Rational(1), Rational(3), Rational(8)});
  try {
    well_separation_constant(bad);
    FAIL() << "expected NotWellSeparated";
  } catch (const InstanceError& e) {
    EXPECT_EQ(e.kind(), InstanceError::Kind::NotWellSeparated);
  }
}

TEST(Envelope, Examples) {
  const auto p = two_speed_profile();
  EXPECT_EQ(envelope_power(p, Q("3/2")), Q("5/2"));
  EXPECT_EQ(envelope_power(p, Rational(0)), Rational(0));
  // 3/4 * P_0 + 1/4 * P_1
  EXPECT_EQ(envelope_power(p, Q("1/4")), Q("3/4") * 0 + Q("1/4") * 1);
  EXPECT_EQ(envelope_power(p, Rational(2)), Rational(4));
  EXPECT_THROW(envelope_power(p, Q("5/2")), InstanceError);
}

TEST(Interpolate, Examples) {
  const auto p = two_speed_profile();
  const auto a = interpolate(p, Q("3/2"), Rational(2));
  EXPECT_EQ(a, (std::vector<SpeedRun>{{1, Rational(1)}, {2, Rational(1)}}));
  EXPECT_EQ(runs_energy(p, a), Rational(5));
  const auto b = interpolate(p, Rational(2), Rational(1));
  EXPECT_EQ(b, (std::vector<SpeedRun>{{2, Rational(1)}}));
  EXPECT_EQ(runs_energy(p, b), Rational(4));
  const auto c = interpolate(p, Q("1/4"), Rational(1));
  EXPECT_EQ(c, (std::vector<SpeedRun>{{0, Q("3/4")}, {1, Q("1/4")}}));
  EXPECT_EQ(runs_energy(p, c), Q("1/4"));
  EXPECT_THROW(interpolate(p, Rational(3), Rational(1)), InstanceError);
}

TEST(EnvelopeProperty, InterpolationEnergyAndConvexity) {
  const auto p = geometric_profile({Rational(1), Rational(2), Rational(4)}, Q("1/2"), Rational(3));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Rational s = Rational(static_cast<long>(rng() % 401)) / 100;
    const Rational t = Rational(static_cast<long>(rng() % 401)) / 100;
    const Rational dur = Rational(static_cast<long>(rng() % 7 + 1)) / 3;
    EXPECT_EQ(runs_energy(p, interpolate(p, s, dur)), dur * envelope_power(p, s));
    const Rational mid = (s + t) / 2;
    EXPECT_LE(envelope_power(p, mid), (envelope_power(p, s) + envelope_power(p, t)) / 2);
    // Lower speed first.
    const auto runs = interpolate(p, s, dur);
    for (std::size_t r = 1; r < runs.size(); ++r) EXPECT_LT(runs[r - 1].speed_index, runs[r].speed_index);
  }
}

TEST(EnvelopeProperty, SeparationIffGeometric) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    std::vector<Rational> slopes{Rational(static_cast<long>(rng() % 4 + 1))};
    for (int k = 1; k < 3; ++k) slopes.push_back(slopes.back() * Rational(static_cast<long>(rng() % 3 + 2)));
    std::vector<Rational> speeds{Rational(1), Rational(2), Rational(3)}, powers;
    Rational acc = 0;
    for (const auto& d : slopes) powers.push_back(acc += d);
    const SpeedProfile p(speeds, powers);
    const bool geometric = slopes[1] * slopes[1] == slopes[0] * slopes[2];
    if (geometric)
      EXPECT_NO_THROW(well_separation_constant(p));
    else
      EXPECT_THROW(well_separation_constant(p), InstanceError);
  }
}
