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

#include <formation_avoid/oracle.hpp>

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/objective.hpp>
#include <formation_avoid/validator.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace formation_avoid {

TrajectorySet integrate_plan(
  const Scenario& s, const std::vector<std::vector<AxisTriple>>& accelerations)
{
  const std::size_t A = s.aircraft_count();
  if (accelerations.size() != s.steps)
    throw std::invalid_argument("acceleration plan has wrong number of steps");
  TrajectorySet traj = nominal_trajectory(s);
  for (std::size_t p = 0; p < A; ++p)
  {
    Track& t = traj.aircraft[p];
    for (std::size_t k = 0; k < s.steps; ++k)
    {
      if (accelerations[k].size() != A)
        throw std::invalid_argument("acceleration plan has wrong number of aircraft");
      t[k].acceleration = accelerations[k][p];
      if (k + 1 == s.steps)
        break;
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        t[k + 1].position[d] = t[k].position[d] + s.dt * t[k].velocity[d] + s.dt * s.wind[d];
        t[k + 1].velocity[d] = t[k].velocity[d] + s.dt * t[k].acceleration[d];
      }
    }
  }
  return traj;
}

OracleResult brute_force_plan(const Scenario& s, std::vector<double> levels,
  const std::vector<std::size_t>& axes)
{
  if (levels.empty())
    throw OracleError("acceleration levels must not be empty");
  for (std::size_t d : axes)
    if (d >= kAxes)
      throw OracleError("axis index " + std::to_string(d) + " out of range");
  std::vector<std::size_t> free_axes(axes);
  std::sort(free_axes.begin(), free_axes.end());
  free_axes.erase(std::unique(free_axes.begin(), free_axes.end()), free_axes.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t A = s.aircraft_count();
  const std::size_t T = s.steps;
  const std::size_t per_step = A * free_axes.size();
  const std::size_t entries = (T > 0 ? T - 1 : 0) * per_step;
  const double size = std::pow(static_cast<double>(levels.size()), static_cast<double>(entries));
  if (!(size <= kOracleSearchCap))
    throw OracleError("search size " + std::to_string(size) + " exceeds cap "
      + std::to_string(kOracleSearchCap));

  OracleResult result;
  std::vector<std::size_t> digits(entries, 0);
  std::vector<std::vector<AxisTriple>> plan(T, std::vector<AxisTriple>(A));
  for (;;)
  {
    for (std::size_t e = 0; e < entries; ++e)
    {
      const std::size_t k = e / per_step;
      const std::size_t p = (e % per_step) / free_axes.size();
      const std::size_t d = free_axes[e % free_axes.size()];
      plan[k][p][d] = levels[digits[e]];
    }
    ++result.nodes_explored;
    TrajectorySet traj = integrate_plan(s, plan);
    if (validate(traj, s).pass())
    {
      ++result.feasible_count;
      const double cost = recompute_objective(traj, s).total();
      if (!result.best_cost || cost < *result.best_cost - 1e-9)
      {
        result.best_cost = cost;
        result.trajectory = std::move(traj);
      }
    }
    // Odometer with the last entry fastest: lexicographic order.
    std::size_t e = entries;
    while (e > 0 && ++digits[e - 1] == levels.size())
      digits[--e] = 0;
    if (e == 0)
      break;
  }
  return result;
}

} // namespace formation_avoid
