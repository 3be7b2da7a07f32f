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

#include <gtest/gtest.h>

namespace formation_avoid {
namespace {

using testing::single_aircraft;
using testing::two_aircraft;

TEST(Nominal, ConstantVelocityIntegration)
{
  const Scenario s = single_aircraft(12);
  const TrajectorySet t = nominal_trajectory(s);
  ASSERT_EQ(t.steps(), 12u);
  EXPECT_EQ(t.aircraft[0][10].position, AxisTriple(7500.0, 0.0, 0.0));
  EXPECT_EQ(t.aircraft[0][10].acceleration, AxisTriple(0.0, 0.0, 0.0));
}

TEST(Nominal, WindAdvancesPosition)
{
  Scenario s = single_aircraft(4);
  s.wind = {10.0, 0.0, 0.0};
  const TrajectorySet t = nominal_trajectory(s);
  for (std::size_t k = 1; k < 4; ++k)
    EXPECT_DOUBLE_EQ(t.aircraft[0][k].position[0] - t.aircraft[0][k - 1].position[0], 760.0);
}

TEST(Nominal, IntruderUsesPreviousPosition)
{
  Scenario s = single_aircraft(12);
  s.intruders.push_back({{7500.0, -15000.0, 0.0}, {0.0, 750.0, 0.0}});
  const TrajectorySet t = nominal_trajectory(s);
  EXPECT_DOUBLE_EQ(t.intruders[0][10].position[1], -7500.0);
  EXPECT_DOUBLE_EQ(t.intruders[0][10].position[0], 7500.0);
  const auto direct = intruder_positions(s);
  EXPECT_EQ(direct[0][10], t.intruders[0][10].position);
}

TEST(Conflict, LiteralSideGeometryOnsetAtEighteenSeconds)
{
  const Scenario s = testing::load_scenario("side_intruder_literal_15000.json");
  const ConflictReport r = predict_conflict(s);
  ASSERT_FALSE(r.empty());
  // Lateral gap (15000 - 750 t) drops below 1500 ft for t > 18 s.
  bool lead_found = false;
  for (const PairConflict& c : r.conflicts)
  {
    if (c.aircraft != 0)
      continue;
    lead_found = true;
    ASSERT_TRUE(c.continuous_onset.has_value());
    EXPECT_NEAR(*c.continuous_onset, 18.0, 1e-9);
    ASSERT_TRUE(c.first_step_time.has_value());
    EXPECT_GE(*c.first_step_time, *c.continuous_onset);
    EXPECT_LE(*c.first_step_time - *c.continuous_onset, s.dt + 1e-9);
  }
  EXPECT_TRUE(lead_found);
  ASSERT_TRUE(r.first_violation_time().has_value());
  EXPECT_NEAR(*r.first_violation_time(), 18.0, s.dt + 1e-9);
}

TEST(Conflict, ParallelCourseNeverConflicts)
{
  Scenario s = single_aircraft(20);
  s.intruders.push_back({{-5000.0, 2000.0, 0.0}, {750.0, 0.0, 0.0}});
  EXPECT_TRUE(predict_conflict(s).empty());
}

TEST(Conflict, NoIntrudersEmptyReport)
{
  EXPECT_TRUE(predict_conflict(two_aircraft()).empty());
  EXPECT_FALSE(predict_conflict(two_aircraft()).first_violation_time().has_value());
}

TEST(Conflict, FarLateralOffsetClearsHorizon)
{
  Scenario s = testing::load_scenario("two_aircraft_side_intruder.json");
  ASSERT_FALSE(predict_conflict(s).empty());
  const double reach = 750.0 * static_cast<double>(s.steps) * s.dt
    + s.safety.intruder_sep[1];
  s.intruders[0].initial_position[1] = -(reach + 1000.0 + 300.0);
  EXPECT_TRUE(predict_conflict(s).empty());
}

TEST(Designated, LeadPlusSlotOffset)
{
  Scenario s = two_aircraft(12);
  s.formation.slot_offsets = {{-2000.0, 1500.0, 0.0}};
  s.formation.initial_positions[1] = {-2000.0, 1500.0, 0.0};
  const auto at10 = designated_positions(s, 10);
  EXPECT_EQ(at10[0], AxisTriple(7500.0, 0.0, 0.0));
  EXPECT_EQ(at10[1], AxisTriple(5500.0, 1500.0, 0.0));
  const auto at0 = designated_positions(s, 0);
  EXPECT_EQ(at0[0], s.formation.initial_positions[0]);
  EXPECT_EQ(at0[1], s.formation.initial_positions[1]);
  const auto track = designated_track(s);
  ASSERT_EQ(track.size(), s.steps);
  EXPECT_EQ(track[10], at10);
}

TEST(Reachable, ContainsNominalPositions)
{
  const Scenario s = testing::load_scenario("three_aircraft_side_intruder.json");
  const TrajectorySet nominal = nominal_trajectory(s);
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
  {
    const ReachableBox box = reachable_box(s, p);
    ASSERT_EQ(box.pos_lo.size(), s.steps);
    for (std::size_t k = 0; k < s.steps; ++k)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const auto& st = nominal.aircraft[p][k];
        EXPECT_LE(box.pos_lo[k][d], st.position[d]);
        EXPECT_GE(box.pos_hi[k][d], st.position[d]);
        EXPECT_LE(box.vel_lo[k][d], st.velocity[d]);
        EXPECT_GE(box.vel_hi[k][d], st.velocity[d]);
      }
  }
}

TEST(Reachable, StepZeroIsThePointInitialState)
{
  const Scenario s = two_aircraft();
  const ReachableBox box = reachable_box(s, 1);
  EXPECT_EQ(box.pos_lo[0], s.formation.initial_positions[1]);
  EXPECT_EQ(box.pos_hi[0], s.formation.initial_positions[1]);
}

} // namespace
} // namespace formation_avoid
