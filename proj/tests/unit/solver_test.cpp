// Copyright 2026 The formation-avoid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "test_support.hpp"

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/model_builder.hpp>
#include <formation_avoid/solver.hpp>
#include <formation_avoid/validator.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

namespace formation_avoid {
namespace {

SolveOptions builtin(double gap = 1e-4)
{
  SolveOptions o;
  o.backend = kBuiltinBackend;
  o.relative_gap_target = gap;
  return o;
}

double rel_diff(double a, double b)
{
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

// Each g, h, k slack must equal the absolute value it bounds.
void expect_tight_slacks(const MilpModel& m, const Solution& sol, const Scenario& s)
{
  const std::vector<std::size_t> slot_of = [&] {
    std::vector<std::size_t> out(s.aircraft_count() > 0 ? s.aircraft_count() - 1 : 0);
    for (std::size_t p = 1; p < s.aircraft_count(); ++p)
      for (std::size_t slot = 0; slot + 1 < s.aircraft_count(); ++slot)
        if (sol.value(m, VarKey::slot(p, slot)) > 0.5)
          out[p - 1] = slot;
    return out;
  }();
  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < s.aircraft_count(); ++p)
    {
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        EXPECT_NEAR(sol.value(m, VarKey::maneuver(k, p, d)),
          std::abs(sol.value(m, VarKey::acc(k, p, d))), 1e-4);
        if (p > 0)
        {
          const double dev = sol.value(m, VarKey::pos(k, p, d))
            - sol.value(m, VarKey::pos(k, 0, d))
            - s.formation.slot_offsets[slot_of[p - 1]][d];
          EXPECT_NEAR(sol.value(m, VarKey::drag(k, p, d)), std::abs(dev), 1e-4);
        }
      }
      if (k > 0)
        EXPECT_NEAR(sol.value(m, VarKey::smooth(k, p)),
          std::abs(sol.value(m, VarKey::pos(k, p, 2)) - sol.value(m, VarKey::pos(k - 1, p, 2))),
          1e-4);
    }
}

TEST(SolveOptions, Checks)
{
  SolveOptions o;
  EXPECT_NO_THROW(o.check());
  o.relative_gap_target = 0.0;
  EXPECT_THROW(o.check(), std::invalid_argument);
  o.relative_gap_target = 1.5;
  EXPECT_THROW(o.check(), std::invalid_argument);
  o.relative_gap_target = 1.0;
  o.time_limit_s = 0.0;
  EXPECT_THROW(o.check(), std::invalid_argument);
}

TEST(RelativeGap, Definition)
{
  EXPECT_DOUBLE_EQ(relative_gap(100.0, 95.0), 0.05);
  EXPECT_DOUBLE_EQ(relative_gap(-100.0, -105.0), 0.05);
  EXPECT_EQ(relative_gap(3.0, 3.0 - 1e-12), 0.0);
  EXPECT_EQ(relative_gap(3.0, 4.0), 0.0);
}

TEST(Backends, Registry)
{
  const auto names = available_backends();
  ASSERT_FALSE(names.empty());
  EXPECT_EQ(names.front(), kBuiltinBackend);
  EXPECT_EQ(make_backend(kBuiltinBackend)->name(), kBuiltinBackend);
  try
  {
    make_backend("gurobi");
    FAIL() << "expected BackendUnavailable";
  }
  catch (const BackendUnavailable& e)
  {
    EXPECT_EQ(e.backend(), "gurobi");
    EXPECT_NE(std::string(e.what()).find("available"), std::string::npos);
  }
}

TEST(Backends, SelectionPrecedence)
{
  SolveOptions o;
  ::unsetenv(kBackendEnvVar);
  EXPECT_EQ(resolve_backend_name(o), kBuiltinBackend);
  ::setenv(kBackendEnvVar, "from-env", 1);
  EXPECT_EQ(resolve_backend_name(o), "from-env");
  o.backend = "from-flag";
  EXPECT_EQ(resolve_backend_name(o), "from-flag");
  ::unsetenv(kBackendEnvVar);
}

TEST(Solve, ConflictFreeNominalIsOptimal)
{
  const Scenario s = testing::load_scenario("conflict_free.json");
  const MilpModel m = build_model(s);
  const Solution sol = solve(m, builtin());
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  const ObjectiveBreakdown nominal = recompute_objective(nominal_trajectory(s), s);
  EXPECT_NEAR(sol.objective, nominal.total(), 1e-6);
  const ExtractedPlan plan = extract_trajectories(m, sol, s);
  EXPECT_EQ(plan.breakdown.maneuver, 0.0);
  EXPECT_EQ(plan.breakdown.smoothness, 0.0);
  EXPECT_LE(plan.objective_mismatch, 1e-4);
  EXPECT_EQ(plan.trajectory.intruders, nominal_trajectory(s).intruders);
  EXPECT_TRUE(validate(plan.trajectory, s).pass());
}

TEST(Solve, ImpossibleTerminalIsInfeasible)
{
  const Scenario s = testing::load_scenario("impossible_terminal.json");
  const MilpModel m = build_model(s);
  const Solution sol = solve(m, builtin());
  EXPECT_EQ(sol.status, SolveStatus::Infeasible);
  EXPECT_FALSE(sol.has_values());
  EXPECT_THROW(extract_trajectories(m, sol, s), ExtractionError);
}

TEST(Solve, TinyTimeLimitNeverClaimsOptimal)
{
  const Scenario s = testing::load_scenario("two_aircraft_side_intruder.json");
  const MilpModel m = build_model(s);
  SolveOptions o = builtin(0.01);
  o.time_limit_s = 1e-4;
  const Solution sol = solve(m, o);
  EXPECT_TRUE(sol.status == SolveStatus::TimedOutNoSolution
    || sol.status == SolveStatus::FeasibleWithGap)
    << to_string(sol.status);
  EXPECT_EQ(sol.has_values(), !sol.values.empty());
}

TEST(Solve, TinyInstanceSlacksTightAndValid)
{
  const Scenario s = testing::load_scenario("tiny_oracle.json");
  const MilpModel m = build_model(s);
  const Solution sol = solve(m, builtin(1e-6));
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  for (const Variable& v : m.variables())
    if (v.type == VarType::Binary)
    {
      const double x = sol.value(m, v.key);
      EXPECT_TRUE(x == 0.0 || x == 1.0) << canonical_name(v.key);
    }
  expect_tight_slacks(m, sol, s);
  const ExtractedPlan plan = extract_trajectories(m, sol, s);
  EXPECT_LE(rel_diff(plan.breakdown.total(), sol.objective), 1e-4);
  EXPECT_TRUE(validate(plan.trajectory, s).pass());
  EXPECT_EQ(sol.relative_gap, relative_gap(sol.objective, sol.best_bound));
}

TEST(Solve, TwoAircraftSlacksTight)
{
  const Scenario s = testing::load_scenario("two_aircraft_side_intruder.json");
  const MilpModel m = build_model(s);
  const Solution sol = solve(m, builtin(0.01));
  ASSERT_TRUE(sol.has_values()) << to_string(sol.status);
  expect_tight_slacks(m, sol, s);
  const ExtractedPlan plan = extract_trajectories(m, sol, s);
  EXPECT_LE(plan.objective_mismatch, 1e-4);
  EXPECT_TRUE(validate(plan.trajectory, s).pass());
}

TEST(Solve, ValueLookupErrors)
{
  const Scenario s = testing::single_aircraft(3, 1);
  const MilpModel m = build_model(s);
  const Solution sol = solve(m, builtin());
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  EXPECT_THROW(sol.value(m, VarKey::pos(0, 5, 0)), ExtractionError);
  Solution empty;
  empty.status = SolveStatus::Optimal;
  EXPECT_THROW(empty.value(m, VarKey::pos(0, 0, 0)), ExtractionError);
}

#ifdef FA_HAVE_HIGHS
TEST(Backends, BuiltinAndHighsAgree)
{
  for (const char* name : {"tiny_oracle.json", "conflict_free.json",
         "two_aircraft_lateral_only.json"})
  {
    SCOPED_TRACE(name);
    const Scenario s = testing::load_scenario(name);
    const MilpModel m = build_model(s);
    SolveOptions a = builtin(1e-6);
    SolveOptions b = a;
    b.backend = kHighsBackend;
    const Solution x = solve(m, a);
    const Solution y = solve(m, b);
    ASSERT_EQ(x.status, SolveStatus::Optimal);
    ASSERT_EQ(y.status, SolveStatus::Optimal);
    EXPECT_LE(rel_diff(x.objective, y.objective), 1e-4);
    EXPECT_EQ(y.stats.backend, kHighsBackend);
  }
  const MilpModel bad = build_model(testing::load_scenario("impossible_terminal.json"));
  SolveOptions h;
  h.backend = kHighsBackend;
  EXPECT_EQ(solve(bad, h).status, SolveStatus::Infeasible);
}
#endif

} // namespace
} // namespace formation_avoid
