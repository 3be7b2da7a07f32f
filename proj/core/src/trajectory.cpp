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

#include <formation_avoid/number_format.hpp>
#include <formation_avoid/trajectory.hpp>

#include <map>
#include <sstream>

namespace formation_avoid {

namespace {

void append_row(std::string& out, std::size_t step, double time,
  const std::string& id, const StateSample& sample)
{
  out += std::to_string(step);
  out += ',';
  out += format_number(time);
  out += ',';
  out += id;
  for (const AxisTriple* t :
    {&sample.position, &sample.velocity, &sample.acceleration})
  {
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      out += ',';
      out += format_number((*t)[d]);
    }
  }
  out += '\n';
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true)
  {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos)
    {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Ordering key so aircraft come before intruders, each by number.
struct TrackKey
{
  bool intruder = false;
  std::size_t number = 0;

  friend auto operator<=>(const TrackKey&, const TrackKey&) = default;
};

bool parse_track_id(std::string_view id, TrackKey& key)
{
  key.intruder = !id.empty() && id.front() == 'I';
  if (key.intruder)
    id.remove_prefix(1);
  if (id.empty())
    return false;
  std::size_t n = 0;
  for (char c : id)
  {
    if (c < '0' || c > '9')
      return false;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  if (n == 0)
    return false;
  key.number = n;
  return true;
}

} // namespace

std::string aircraft_id(std::size_t p) { return std::to_string(p + 1); }

std::string intruder_id(std::size_t r) { return "I" + std::to_string(r + 1); }

std::string write_trajectory_csv(const TrajectorySet& traj)
{
  std::string out(kTrajectoryCsvHeader);
  out += '\n';
  for (std::size_t p = 0; p < traj.aircraft.size(); ++p)
  {
    for (std::size_t k = 0; k < traj.aircraft[p].size(); ++k)
    {
      append_row(out, k, traj.dt * static_cast<double>(k), aircraft_id(p),
        traj.aircraft[p][k]);
    }
  }
  for (std::size_t r = 0; r < traj.intruders.size(); ++r)
  {
    for (std::size_t k = 0; k < traj.intruders[r].size(); ++k)
    {
      append_row(out, k, traj.dt * static_cast<double>(k), intruder_id(r),
        traj.intruders[r][k]);
    }
  }
  return out;
}

TrajectorySet read_trajectory_csv(std::string_view text)
{
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n'))
  {
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (!line.empty())
      lines.push_back(line);
  }
  if (lines.empty() || lines.front() != kTrajectoryCsvHeader)
    throw TrajectoryFormatError("trajectory CSV: header mismatch");

  std::map<TrackKey, std::map<std::size_t, std::pair<double, StateSample>>>
    tracks;
  for (std::size_t n = 1; n < lines.size(); ++n)
  {
    const auto fields = split(lines[n], ',');
    const std::string where = "trajectory CSV line " + std::to_string(n + 1);
    if (fields.size() != 12)
      throw TrajectoryFormatError(where + ": expected 12 columns");
    double step_value = 0.0;
    if (!parse_number(fields[0], step_value) || step_value < 0
      || step_value != static_cast<double>(static_cast<std::size_t>(step_value)))
      throw TrajectoryFormatError(where + ": bad step");
    double time = 0.0;
    if (!parse_number(fields[1], time))
      throw TrajectoryFormatError(where + ": bad time_s");
    TrackKey key;
    if (!parse_track_id(fields[2], key))
      throw TrajectoryFormatError(where + ": bad aircraft id");
    StateSample sample;
    AxisTriple* parts[] = {
      &sample.position, &sample.velocity, &sample.acceleration};
    for (std::size_t i = 0; i < 9; ++i)
    {
      if (!parse_number(fields[3 + i], (*parts[i / 3])[i % 3]))
        throw TrajectoryFormatError(where + ": bad number");
    }
    const auto step = static_cast<std::size_t>(step_value);
    if (!tracks[key].emplace(step, std::make_pair(time, sample)).second)
      throw TrajectoryFormatError(where + ": duplicate step");
  }
  if (tracks.empty())
    throw TrajectoryFormatError("trajectory CSV: no rows");

  TrajectorySet traj;
  std::size_t steps = 0;
  std::size_t expected_aircraft = 1;
  std::size_t expected_intruder = 1;
  bool have_dt = false;
  for (const auto& [key, rows] : tracks)
  {
    std::size_t& expected = key.intruder ? expected_intruder : expected_aircraft;
    if (key.number != expected)
      throw TrajectoryFormatError("trajectory CSV: track ids not contiguous");
    ++expected;
    if (steps == 0)
      steps = rows.size();
    if (rows.size() != steps || rows.rbegin()->first != steps - 1)
      throw TrajectoryFormatError("trajectory CSV: truncated or uneven track");
    Track track;
    track.reserve(steps);
    for (const auto& [step, entry] : rows)
    {
      if (step == 1 && !have_dt)
      {
        traj.dt = entry.first;
        have_dt = true;
      }
      track.push_back(entry.second);
    }
    (key.intruder ? traj.intruders : traj.aircraft).push_back(std::move(track));
  }
  return traj;
}

} // namespace formation_avoid
