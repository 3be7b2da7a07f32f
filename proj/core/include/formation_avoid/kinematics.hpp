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

#ifndef FORMATION_AVOID_KINEMATICS_HPP
#define FORMATION_AVOID_KINEMATICS_HPP

#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>

#include <optional>
#include <vector>

namespace formation_avoid {

/// Zero-acceleration propagation of every aircraft (with wind) and every
/// intruder (constant velocity, no wind term).
TrajectorySet nominal_trajectory(const Scenario& scenario);

/// Intruder positions for all steps: intruder_positions(s)[r][k].
std::vector<std::vector<AxisTriple>> intruder_positions(const Scenario& scenario);

struct PairConflict
{
  std::size_t aircraft = 0;
  std::size_t intruder = 0;
  /// First sampled step at which all three gaps are below intruder_sep.
  std::optional<std::size_t> first_step;
  std::optional<double> first_step_time;
  /// Per-axis absolute gaps at first_step.
  AxisTriple gaps_at_first_step;
  /// Infimum of the continuous-time violation interval within the horizon,
  /// from the closed-form per-axis linear gap equations.
  std::optional<double> continuous_onset;
};

/// One entry per (aircraft, intruder) pair whose nominal motion violates
/// separation either at a sampled step or in continuous time.
struct ConflictReport
{
  std::vector<PairConflict> conflicts;

  bool empty() const { return conflicts.empty(); }
  /// Earliest sampled violation over all pairs, if any.
  std::optional<double> first_violation_time() const;
};

ConflictReport predict_conflict(const Scenario& scenario);

/// Course-fixed target of every aircraft at `step` (0-based): the lead's
/// nominal position plus the aircraft's own slot offset.
std::vector<AxisTriple> designated_positions(
  const Scenario& scenario, std::size_t step);

/// designated_positions for every step at once: result[k][p].
std::vector<std::vector<AxisTriple>> designated_track(const Scenario& scenario);

/// Conservative per-step reachable box of one aircraft, from the initial
/// state, the acceleration envelope and the velocity envelope.
struct ReachableBox
{
  std::vector<AxisTriple> pos_lo, pos_hi;
  std::vector<AxisTriple> vel_lo, vel_hi;
};

ReachableBox reachable_box(const Scenario& scenario, std::size_t aircraft);

} // namespace formation_avoid

#endif // FORMATION_AVOID_KINEMATICS_HPP
