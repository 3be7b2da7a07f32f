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
#include <formation_avoid/oracle.hpp>
#include <formation_avoid/solver.hpp>
#include <formation_avoid/validator.hpp>

#include <gtest/gtest.h>

namespace formation_avoid {
namespace {

constexpr std::size_t kLateral = 1;

TEST(Oracle, ConflictFreeOptimumIsTheNominalPlan)
{
  const Scenario s = testing::single_aircraft(8, 1);
  const OracleResult r = brute_force_plan(s, {8.0, 0.0, -8.0}, {kLateral});
  ASSERT_TRUE(r.best_cost.has_value());
  EXPECT_EQ(*r.best_cost, 0.0);
  EXPECT_EQ(r.nodes_explored, 2187u);  // 3^7
  EXPECT_GT(r.feasible_count, 1u);
  EXPECT_EQ(r.trajectory, nominal_trajectory(s));
}

TEST(Oracle, TieBreakIsLexicographic)
{
  // With zero weights every feasible sequence ties. The terminal step needs
  // zero lateral speed, so the lateral accelerations sum to zero; the
  // smallest such sequence over {-8, 0, 8} is (-8, -8, -8, 0, 8, 8, 8).
  Scenario s = testing::single_aircraft(8, 1);
  s.weights = {0.0, 0.0, 0.0, 0.0};
  const OracleResult r = brute_force_plan(s, {0.0, 8.0, -8.0, 8.0}, {kLateral});
  ASSERT_TRUE(r.best_cost.has_value());
  const double expected[] = {-8, -8, -8, 0, 8, 8, 8, 0};
  for (std::size_t k = 0; k < 8; ++k)
    EXPECT_EQ(r.trajectory.aircraft[0][k].acceleration[1], expected[k]) << k;
  EXPECT_TRUE(validate(r.trajectory, s).pass());
}

TEST(Oracle, TinyInstanceBoundsTheMilp)
{
  const Scenario s = testing::load_scenario("tiny_oracle.json");
  const double u = s.envelope.u_hi[kLateral];
  const OracleResult oracle = brute_force_plan(s, {-u, 0.0, u}, {kLateral});
  ASSERT_TRUE(oracle.best_cost.has_value());
  EXPECT_GT(*oracle.best_cost, 0.0);
  EXPECT_TRUE(validate(oracle.trajectory, s).pass());
  EXPECT_DOUBLE_EQ(recompute_objective(oracle.trajectory, s).total(), *oracle.best_cost);

  const MilpModel model = build_model(s);
  SolveOptions options;
  options.backend = kBuiltinBackend;
  options.relative_gap_target = 1e-6;
  const Solution sol = solve(model, options);
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  EXPECT_LE(sol.objective, *oracle.best_cost + 1e-6);
  const ExtractedPlan plan = extract_trajectories(model, sol, s);
  EXPECT_TRUE(validate(plan.trajectory, s).pass());
}

TEST(Oracle, Guards)
{
  const Scenario s = testing::single_aircraft(8, 1);
  EXPECT_THROW(brute_force_plan(s, {}, {kLateral}), OracleError);
  EXPECT_THROW(brute_force_plan(s, {0.0}, {3}), OracleError);
  EXPECT_THROW(brute_force_plan(testing::single_aircraft(30, 2), {-1, 0, 1, 2, 3}, {kLateral}),
    OracleError);
}

TEST(Oracle, IntegratePlanFollowsDynamics)
{
  Scenario s = testing::single_aircraft(5, 1);
  s.wind = {5.0, 0.0, 0.0};
  std::vector<std::vector<AxisTriple>> acc(5, std::vector<AxisTriple>(1));
  acc[1][0] = {1.0, 2.0, -1.0};
  const TrajectorySet t = integrate_plan(s, acc);
  EXPECT_EQ(t.aircraft[0][2].velocity, AxisTriple(751.0, 2.0, -1.0));
  EXPECT_EQ(t.aircraft[0][3].position, AxisTriple(3 * 755.0 + 1.0, 2.0, -1.0));
  EXPECT_TRUE(validate(t, s).family(CheckFamily::Dynamics).pass());
}

} // namespace
} // namespace formation_avoid
