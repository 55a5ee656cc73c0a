#include <gtest/gtest.h>

#include <random>

#include "minrate/generator.hpp"
#include "minrate/oracle.hpp"
#include "minrate/yds.hpp"
#include "support.hpp"

using namespace minrate;
using namespace minrate::testing;

TEST(SolveLp, TwoVariableOptimum) {
  // min x + y  s.t.  x + 2y >= 2,  3x + y >= 3
  LinearProgram lp;
  lp.variables = 2;
  lp.cost = {Rational(1), Rational(1)};
  lp.rows.push_back({{{0, Rational(1)}, {1, Rational(2)}}, LinearProgram::Sense::Ge, Rational(2)});
  lp.rows.push_back({{{0, Rational(3)}, {1, Rational(1)}}, LinearProgram::Sense::Ge, Rational(3)});
  const auto r = solve_lp(lp);
  EXPECT_EQ(r.objective, Q("7/5"));
  EXPECT_EQ(r.x, (std::vector<Rational>{Q("4/5"), Q("3/5")}));
}

TEST(SolveLp, InfeasibleAndUnbounded) {
  LinearProgram bad;
  bad.variables = 1;
  bad.cost = {Rational(1)};
  bad.rows.push_back({{{0, Rational(1)}}, LinearProgram::Sense::Le, Rational(1)});
  bad.rows.push_back({{{0, Rational(1)}}, LinearProgram::Sense::Ge, Rational(2)});
  try {
    solve_lp(bad);
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.kind(), OracleError::Kind::Infeasible);
  }
  LinearProgram open;
  open.variables = 1;
  open.cost = {Rational(-1)};
  open.rows.push_back({{{0, Rational(1)}}, LinearProgram::Sense::Ge, Rational(1)});
  try {
    solve_lp(open);
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.kind(), OracleError::Kind::Unbounded);
  }
}

TEST(Discretize, Counting) {
  const auto in = worked_example();
  EXPECT_EQ(discretize(in, Q("1/4")).x_variable_count(), 64u);
  EXPECT_EQ(discretize(in, Rational(1)).x_variable_count(), 16u);
  EXPECT_EQ(discretize(in, Q("1/3")).x_variable_count(), 48u);
  try {
    discretize(in, Q("3/8"));
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.kind(), OracleError::Kind::IncompatibleSlot);
  }
}

// The worked example's optimum as a one-parameter family: job 1 places a units in [0, 1)
// at speed 1 and the rest after 2, so R = max((a + 4) / 2, (9 - 2a) / 4).
TEST(LpMinRate, WorkedExampleMatchesParametricMinimum) {
  Rational best = 1000, arg = -1;
  for (int i = 0; i <= 64; ++i) {
    const Rational a = Rational(i) / 64;
    const Rational r = std::max(Rational((a + 4) / 2), Rational((9 - 2 * a) / 4));
    if (r < best) best = r, arg = a;
  }
  EXPECT_EQ(arg, Q("1/4"));
  EXPECT_EQ(best, Q("17/8"));
  EXPECT_EQ(lp_min_rate(discretize(worked_example(), Q("1/4"))).rate, best);
}

TEST(LpMinRate, SmallCases) {
  EXPECT_EQ(lp_min_rate(discretize(single_job(0, 1, 1), Q("1/2"))).rate, Rational(1));
  try {
    lp_min_rate(discretize(single_job(0, 1, 3), Q("1/2")));
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.kind(), OracleError::Kind::Infeasible);
  }
}

TEST(LpMinRate, SlotScheduleRealizesTheRate) {
  const auto in = worked_example();
  const auto lp = discretize(in, Q("1/4"));
  const auto sol = lp_min_rate(lp);
  const auto s = slot_schedule(in, lp, sol);
  EXPECT_TRUE(feasibility_check(s, in, sol.rate).empty());
  EXPECT_EQ(min_feasible_rate(s, in.profile), sol.rate);
}

TEST(Refine, Examples) {
  const auto r = refine_until_stable(worked_example(), Rational(1));
  EXPECT_EQ(r.rate, Q("17/8"));
  ASSERT_GE(r.history.size(), 2u);
  EXPECT_EQ(r.history.front().first, Rational(1));

  Instance flat;
  flat.profile = SpeedProfile({Rational(1)}, {Rational(1)});
  flat.jobs = {{1, Rational(0), Rational(2), Rational(1)}};
  const auto f = refine_until_stable(flat, Rational(1));
  EXPECT_EQ(f.history.size(), 2u);
  EXPECT_EQ(f.rate, Q("1/2"));
}

TEST(BruteForce, SlotRateAgreesWithLpOnWorkedExample) {
  const auto in = worked_example();
  EXPECT_EQ(brute_force_slot_rate(in, Q("1/4")), Q("17/8"));
  EXPECT_EQ(brute_force_slot_rate(single_job(0, 1, 1), Q("1/2")), Rational(1));
  EXPECT_EQ(brute_force_slot_rate(single_job(0, 1, 3), Q("1/2")), std::nullopt);
}

// Refinement never raises the optimum; the LP is at most the YDS rate and YDS is within
// a factor two of it.
TEST(OracleProperty, MonotoneAndBracketsYds) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const Instance in = generate_instance(rng);
    const auto r = refine_until_stable(in, Rational(1));
    for (std::size_t h = 1; h < r.history.size(); ++h) EXPECT_LE(r.history[h].second, r.history[h - 1].second);
    const Rational yds = min_feasible_rate(yds_global(in).schedule, in.profile);
    EXPECT_LE(r.rate, yds);
    EXPECT_LE(yds, 2 * r.rate);
  }
}

// Relaxation bound: at most the slot-integral optimum on two-job instances.
TEST(OracleProperty, RelaxationBelowIntegral) {
  std::mt19937_64 rng(2);
  GeneratorBounds b;
  b.max_jobs = 2;
  b.max_time = 3;
  int compared = 0;
  for (int i = 0; i < 30; ++i) {
    const Instance in = generate_instance(rng, b);
    const auto brute = brute_force_slot_rate(in, Q("1/2"));
    if (!brute) continue;
    ++compared;
    EXPECT_LE(lp_min_rate(discretize(in, Q("1/2"))).rate, *brute);
  }
  EXPECT_GT(compared, 10);
}
