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

#include "sweep.hpp"

#include <formation_avoid/model_builder.hpp>
#include <formation_avoid/number_format.hpp>

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace formation_avoid::cli {
namespace {

using nlohmann::json;

std::vector<double> read_axis(const json& doc, const char* key, double fallback)
{
  if (!doc.contains(key))
    return {fallback};
  const json& v = doc.at(key);
  if (!v.is_array())
    throw SweepSpecError(std::string("sweep spec: ") + key + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
      throw SweepSpecError(std::string("sweep spec: ") + key + "[" + std::to_string(i)
        + "] must be a finite number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

} // namespace

SweepSpec parse_sweep_spec(std::string_view text, const Scenario& base)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    throw SweepSpecError(std::string("sweep spec: ") + e.what());
  }
  if (!doc.is_object())
    throw SweepSpecError("sweep spec: top level must be an object");
  for (const auto& [key, value] : doc.items())
  {
    if (key != "intruder" && key != "along_ft" && key != "lateral_ft" && key != "heading_deg"
      && key != "speed_fps" && key != "steps" && key != "description")
      throw SweepSpecError("sweep spec: unknown key " + key);
  }

  SweepSpec spec;
  if (doc.contains("intruder"))
  {
    const json& v = doc.at("intruder");
    if (!v.is_number_integer() || v.get<long long>() < 1)
      throw SweepSpecError("sweep spec: intruder must be a 1-based index");
    spec.intruder = static_cast<std::size_t>(v.get<long long>() - 1);
  }
  if (spec.intruder >= base.intruder_count())
    throw SweepSpecError("sweep spec: scenario has no intruder "
      + std::to_string(spec.intruder + 1));
  if (doc.contains("steps"))
  {
    const json& v = doc.at("steps");
    if (!v.is_number_integer() || v.get<long long>() < 2)
      throw SweepSpecError("sweep spec: steps must be an integer >= 2");
    spec.steps = static_cast<std::size_t>(v.get<long long>());
  }

  const Intruder& in = base.intruders[spec.intruder];
  const double heading =
    std::atan2(in.velocity[1], in.velocity[0]) * 180.0 / std::numbers::pi;
  const double speed = std::hypot(in.velocity[0], in.velocity[1]);
  spec.along_ft = read_axis(doc, "along_ft", in.initial_position[0]);
  spec.lateral_ft = read_axis(doc, "lateral_ft", in.initial_position[1]);
  spec.heading_deg = read_axis(doc, "heading_deg", heading);
  spec.speed_fps = read_axis(doc, "speed_fps", speed);
  spec.sweeps_velocity = doc.contains("heading_deg") || doc.contains("speed_fps");
  return spec;
}

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec)
{
  std::vector<SweepCell> cells;
  for (double a : spec.along_ft)
    for (double l : spec.lateral_ft)
      for (double h : spec.heading_deg)
        for (double v : spec.speed_fps)
          cells.push_back({a, l, h, v});
  return cells;
}

Scenario apply_cell(const Scenario& base, const SweepSpec& spec, const SweepCell& cell)
{
  Scenario s = base;
  if (spec.steps)
    s.steps = *spec.steps;
  Intruder& in = s.intruders[spec.intruder];
  in.initial_position[0] = cell.along_ft;
  in.initial_position[1] = cell.lateral_ft;
  if (spec.sweeps_velocity)
  {
    const double h = cell.heading_deg * std::numbers::pi / 180.0;
    in.velocity[0] = cell.speed_fps * std::cos(h);
    in.velocity[1] = cell.speed_fps * std::sin(h);
  }
  return s;
}

std::vector<SweepResult> run_sweep(const Scenario& base, const SweepSpec& spec,
  const std::vector<SweepCell>& cells, const SolveOptions& options, std::size_t jobs)
{
  std::vector<SweepResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
    {
      SweepResult& r = results[i];
      try
      {
        const Scenario s = apply_cell(base, spec, cells[i]);
        check_scenario(s);
        const MilpModel model = build_model(s);
        const Solution sol = solve(model, options);
        r.status = to_string(sol.status);
        if (sol.has_values())
        {
          const ExtractedPlan plan = extract_trajectories(model, sol, s);
          r.objective = sol.objective;
          r.relative_gap = sol.relative_gap;
          r.maneuver = plan.breakdown.maneuver;
        }
      }
      catch (const BackendError& e)
      {
        r.status = "BackendError";
        r.detail = e.what();
      }
      catch (const std::exception& e)
      {
        r.status = "InvalidCell";
        r.detail = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  return results;
}

std::string sweep_table_csv(
  const std::vector<SweepCell>& cells, const std::vector<SweepResult>& results)
{
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s)
    {
      if (c == '"')
        out += '"';
      out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "cell,along_ft,lateral_ft,heading_deg,speed_fps,status,feasible,objective,"
        "relative_gap,maneuver,detail\n";
  for (std::size_t i = 0; i < cells.size(); ++i)
  {
    const SweepCell& c = cells[i];
    const SweepResult& r = results[i];
    os << i + 1 << ',' << format_number(c.along_ft) << ',' << format_number(c.lateral_ft)
       << ',' << format_number(c.heading_deg) << ',' << format_number(c.speed_fps) << ','
       << r.status << ',' << (r.feasible() ? "yes" : "no") << ',' << opt(r.objective) << ','
       << opt(r.relative_gap) << ',' << opt(r.maneuver) << ','
       << (r.detail.empty() ? std::string() : quote(r.detail)) << '\n';
  }
  return os.str();
}

} // namespace formation_avoid::cli
