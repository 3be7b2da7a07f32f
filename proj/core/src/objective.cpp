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

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/objective.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace formation_avoid {

namespace {

double slot_deviation(const TrajectorySet& traj, const Scenario& s,
  std::size_t p, std::size_t slot)
{
  const std::size_t last = traj.steps() - 1;
  const AxisTriple& lead = traj.aircraft[0][last].position;
  const AxisTriple& pos = traj.aircraft[p][last].position;
  double total = 0.0;
  for (std::size_t d = 0; d < kAxes; ++d)
    total += std::abs(pos[d] - lead[d] - s.formation.slot_offsets[slot][d]);
  return total;
}

} // namespace

std::vector<std::size_t> final_slot_assignment(
  const TrajectorySet& traj, const Scenario& s)
{
  const std::size_t A = traj.aircraft.size();
  if (A < 2)
    return {};
  const std::size_t S = A - 1;
  if (S > 20)
    throw std::invalid_argument("slot assignment supports at most 21 aircraft");

  std::vector<std::vector<double>> cost(S, std::vector<double>(S));
  for (std::size_t p = 0; p < S; ++p)
    for (std::size_t slot = 0; slot < S; ++slot)
      cost[p][slot] = slot_deviation(traj, s, p + 1, slot);

  // best[mask]: cheapest completion once the slots in `mask` are taken by
  // aircraft 0..popcount(mask)-1.
  const std::size_t full = (std::size_t{1} << S) - 1;
  std::vector<double> best(full + 1, std::numeric_limits<double>::infinity());
  best[full] = 0.0;
  for (std::size_t mask = full; mask-- > 0;)
  {
    const auto p = static_cast<std::size_t>(__builtin_popcountll(mask));
    for (std::size_t slot = 0; slot < S; ++slot)
      if (!(mask & (std::size_t{1} << slot)))
        best[mask] = std::min(best[mask],
          cost[p][slot] + best[mask | (std::size_t{1} << slot)]);
  }

  std::vector<std::size_t> slot_of(S);
  std::size_t mask = 0;
  for (std::size_t p = 0; p < S; ++p)
  {
    for (std::size_t slot = 0; slot < S; ++slot)
    {
      if (mask & (std::size_t{1} << slot))
        continue;
      const double via = cost[p][slot] + best[mask | (std::size_t{1} << slot)];
      if (via <= best[mask] + 1e-9 * (1.0 + best[mask]))
      {
        slot_of[p] = slot;
        mask |= std::size_t{1} << slot;
        break;
      }
    }
  }
  return slot_of;
}

ObjectiveBreakdown recompute_objective(const TrajectorySet& traj, const Scenario& s)
{
  const std::size_t A = traj.aircraft.size();
  const std::size_t T = traj.steps();
  if (A != s.aircraft_count() || T != s.steps)
    throw std::invalid_argument("trajectory does not match the scenario dimensions");

  ObjectiveBreakdown out;
  out.slot_of = final_slot_assignment(traj, s);
  const auto designated = designated_track(s);
  const AxisTriple& tol = s.safety.formation_tol;

  double maneuver = 0.0;
  double drag = 0.0;
  double smooth = 0.0;
  for (std::size_t p = 0; p < A; ++p)
  {
    const Track& track = traj.aircraft[p];
    for (std::size_t k = 0; k < T; ++k)
    {
      const StateSample& st = track[k];
      bool placed = true;
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        maneuver += std::abs(st.acceleration[d]);
        if (std::abs(st.position[d] - designated[k][p][d]) > tol[d] + kPlacementSlack)
          placed = false;
        if (p > 0)
          drag += std::abs(st.position[d] - traj.aircraft[0][k].position[d]
            - s.formation.slot_offsets[out.slot_of[p - 1]][d]);
      }
      if (!placed)
        ++out.off_position_count;
      if (k > 0)
        smooth += std::abs(st.position.vertical() - track[k - 1].position.vertical());
    }
  }
  out.maneuver = s.weights.w_g * maneuver;
  out.avoidance = s.weights.w_t * static_cast<double>(out.off_position_count);
  out.drag = s.weights.w_h * drag;
  out.smoothness = s.weights.w_k * smooth;
  return out;
}

} // namespace formation_avoid
