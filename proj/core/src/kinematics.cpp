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

#include <algorithm>
#include <cmath>
#include <limits>

namespace formation_avoid {

namespace {

Track propagate(const AxisTriple& x0, const AxisTriple& v, const AxisTriple& drift,
  double dt, std::size_t steps)
{
  Track track(steps);
  AxisTriple x = x0;
  for (std::size_t k = 0; k < steps; ++k)
  {
    track[k].position = x;
    track[k].velocity = v;
    track[k].acceleration = AxisTriple{};
    x = x + (v + drift) * dt;
  }
  return track;
}

struct Interval
{
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Open set of t where |g0 + rate*t| < limit.
Interval below_limit(double g0, double rate, double limit)
{
  if (rate == 0.0)
  {
    if (std::abs(g0) < limit)
      return {};
    return {0.0, 0.0};
  }
  double a = (-limit - g0) / rate;
  double b = (limit - g0) / rate;
  if (a > b)
    std::swap(a, b);
  return {a, b};
}

} // namespace

TrajectorySet nominal_trajectory(const Scenario& s)
{
  TrajectorySet traj;
  traj.dt = s.dt;
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
  {
    traj.aircraft.push_back(propagate(s.formation.initial_positions[p],
      s.formation.initial_velocities[p], s.wind, s.dt, s.steps));
  }
  for (const auto& intruder : s.intruders)
  {
    traj.intruders.push_back(propagate(intruder.initial_position,
      intruder.velocity, AxisTriple{}, s.dt, s.steps));
  }
  return traj;
}

std::vector<std::vector<AxisTriple>> intruder_positions(const Scenario& s)
{
  std::vector<std::vector<AxisTriple>> out;
  for (const auto& intruder : s.intruders)
  {
    const Track track = propagate(
      intruder.initial_position, intruder.velocity, AxisTriple{}, s.dt, s.steps);
    std::vector<AxisTriple> positions;
    positions.reserve(track.size());
    for (const auto& sample : track)
      positions.push_back(sample.position);
    out.push_back(std::move(positions));
  }
  return out;
}

std::optional<double> ConflictReport::first_violation_time() const
{
  std::optional<double> best;
  for (const auto& c : conflicts)
  {
    if (c.first_step_time && (!best || *c.first_step_time < *best))
      best = c.first_step_time;
  }
  return best;
}

ConflictReport predict_conflict(const Scenario& s)
{
  ConflictReport report;
  const TrajectorySet nominal = nominal_trajectory(s);
  const AxisTriple& sep = s.safety.intruder_sep;
  const double horizon = s.time_at(s.steps - 1);

  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
  {
    for (std::size_t r = 0; r < s.intruder_count(); ++r)
    {
      PairConflict conflict;
      conflict.aircraft = p;
      conflict.intruder = r;

      for (std::size_t k = 0; k < s.steps; ++k)
      {
        const AxisTriple gap = nominal.aircraft[p][k].position
          - nominal.intruders[r][k].position;
        bool inside = true;
        AxisTriple abs_gap;
        for (std::size_t d = 0; d < kAxes; ++d)
        {
          abs_gap[d] = std::abs(gap[d]);
          inside = inside && abs_gap[d] < sep[d];
        }
        if (inside)
        {
          conflict.first_step = k;
          conflict.first_step_time = s.time_at(k);
          conflict.gaps_at_first_step = abs_gap;
          break;
        }
      }

      const AxisTriple g0 = s.formation.initial_positions[p]
        - s.intruders[r].initial_position;
      const AxisTriple rate =
        s.formation.initial_velocities[p] + s.wind - s.intruders[r].velocity;
      Interval window;
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const Interval axis = below_limit(g0[d], rate[d], sep[d]);
        window.lo = std::max(window.lo, axis.lo);
        window.hi = std::min(window.hi, axis.hi);
      }
      const double lo = std::max(window.lo, 0.0);
      const double hi = std::min(window.hi, horizon);
      const bool nonempty =
        lo < hi || (lo == hi && window.lo < lo && lo < window.hi);
      if (nonempty)
        conflict.continuous_onset = lo;

      if (conflict.first_step || conflict.continuous_onset)
        report.conflicts.push_back(conflict);
    }
  }
  return report;
}

std::vector<std::vector<AxisTriple>> designated_track(const Scenario& s)
{
  const std::size_t count = s.aircraft_count();
  std::vector<std::vector<AxisTriple>> out(s.steps);
  const Track lead = propagate(s.formation.initial_positions.front(),
    s.formation.initial_velocities.front(), s.wind, s.dt, s.steps);
  for (std::size_t k = 0; k < s.steps; ++k)
  {
    out[k].reserve(count);
    out[k].push_back(lead[k].position);
    for (std::size_t p = 1; p < count; ++p)
      out[k].push_back(lead[k].position + s.formation.slot_offsets[p - 1]);
  }
  return out;
}

std::vector<AxisTriple> designated_positions(const Scenario& s, std::size_t step)
{
  // Same recursion as the nominal track so both agree bit for bit.
  AxisTriple x = s.formation.initial_positions.front();
  const AxisTriple& v = s.formation.initial_velocities.front();
  for (std::size_t k = 0; k < step; ++k)
    x = x + (v + s.wind) * s.dt;
  std::vector<AxisTriple> out{x};
  for (const auto& offset : s.formation.slot_offsets)
    out.push_back(x + offset);
  return out;
}

ReachableBox reachable_box(const Scenario& s, std::size_t aircraft)
{
  ReachableBox box;
  const auto& env = s.envelope;
  const AxisTriple& x0 = s.formation.initial_positions[aircraft];
  const AxisTriple& v0 = s.formation.initial_velocities[aircraft];
  box.pos_lo.resize(s.steps);
  box.pos_hi.resize(s.steps);
  box.vel_lo.resize(s.steps);
  box.vel_hi.resize(s.steps);
  for (std::size_t k = 0; k < s.steps; ++k)
  {
    const double elapsed = s.time_at(k);
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      box.vel_lo[k][d] = std::max(env.v_lo[d], v0[d] + elapsed * env.u_lo[d]);
      box.vel_hi[k][d] = std::min(env.v_hi[d], v0[d] + elapsed * env.u_hi[d]);
      if (k == 0)
      {
        box.pos_lo[k][d] = x0[d];
        box.pos_hi[k][d] = x0[d];
      }
      else
      {
        box.pos_lo[k][d] =
          box.pos_lo[k - 1][d] + (box.vel_lo[k - 1][d] + s.wind[d]) * s.dt;
        box.pos_hi[k][d] =
          box.pos_hi[k - 1][d] + (box.vel_hi[k - 1][d] + s.wind[d]) * s.dt;
      }
    }
  }
  return box;
}

} // namespace formation_avoid
