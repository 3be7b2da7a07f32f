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

#ifndef FORMATION_AVOID_OBJECTIVE_HPP
#define FORMATION_AVOID_OBJECTIVE_HPP

#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>

#include <cstddef>
#include <vector>

namespace formation_avoid {

/// Slack on formation_tol when deciding whether an aircraft is at its
/// designated position, to absorb solver round-off at the boundary.
inline constexpr double kPlacementSlack = 1e-4;

struct ObjectiveBreakdown
{
  double maneuver = 0.0;
  double avoidance = 0.0;
  double drag = 0.0;
  double smoothness = 0.0;
  /// slot_of[p - 1] is the slot of non-lead aircraft p.
  std::vector<std::size_t> slot_of;
  /// Aircraft-steps outside formation_tol of the designated position.
  std::size_t off_position_count = 0;

  double total() const { return maneuver + avoidance + drag + smoothness; }
};

/// Evaluates every cost term directly from the trajectory:
///   maneuver    w_g * sum |u|
///   avoidance   w_t * (aircraft-steps away from the designated position)
///   drag        w_h * sum |x_p - x_lead - offset(slot_of p)|, non-lead only
///   smoothness  w_k * sum_k |x3(k) - x3(k-1)|
/// The slot assignment minimizes the summed final-step deviation; ties go
/// to the lexicographically smallest assignment.
ObjectiveBreakdown recompute_objective(const TrajectorySet& traj, const Scenario& s);

/// Slot assignment used by recompute_objective.
std::vector<std::size_t> final_slot_assignment(
  const TrajectorySet& traj, const Scenario& s);

} // namespace formation_avoid

#endif // FORMATION_AVOID_OBJECTIVE_HPP
