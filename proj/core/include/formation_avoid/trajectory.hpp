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

#ifndef FORMATION_AVOID_TRAJECTORY_HPP
#define FORMATION_AVOID_TRAJECTORY_HPP

#include <formation_avoid/axis_triple.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formation_avoid {

struct StateSample
{
  AxisTriple position;
  AxisTriple velocity;
  AxisTriple acceleration;

  friend bool operator==(const StateSample&, const StateSample&) = default;
};

using Track = std::vector<StateSample>;

/// Per-step states of every formation aircraft and every intruder.
/// aircraft[p][k] is aircraft p at step k (time k*dt).
struct TrajectorySet
{
  double dt = 1.0;
  std::vector<Track> aircraft;
  std::vector<Track> intruders;

  std::size_t steps() const
  {
    if (!aircraft.empty())
      return aircraft.front().size();
    return intruders.empty() ? 0 : intruders.front().size();
  }

  friend bool operator==(const TrajectorySet&, const TrajectorySet&) = default;
};

class TrajectoryFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Column header of the trajectory CSV exchange format.
inline constexpr std::string_view kTrajectoryCsvHeader =
  "step,time_s,aircraft,x1_ft,x2_ft,x3_ft,v1_fps,v2_fps,v3_fps,"
  "u1_fps2,u2_fps2,u3_fps2";

/// Track ids used in the CSV: "1".."A" for aircraft, "I1".."INI" for
/// intruders.
std::string aircraft_id(std::size_t p);
std::string intruder_id(std::size_t r);

std::string write_trajectory_csv(const TrajectorySet& traj);

/// Parse the CSV format. Throws TrajectoryFormatError on a header mismatch,
/// malformed numbers, missing or duplicate steps, or tracks of unequal
/// length.
TrajectorySet read_trajectory_csv(std::string_view text);

} // namespace formation_avoid

#endif // FORMATION_AVOID_TRAJECTORY_HPP
