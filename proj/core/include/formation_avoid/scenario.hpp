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

#ifndef FORMATION_AVOID_SCENARIO_HPP
#define FORMATION_AVOID_SCENARIO_HPP

#include <formation_avoid/axis_triple.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formation_avoid {

/// Velocity and acceleration boxes shared by every formation aircraft.
///
/// Defaults describe a narrow-body airliner at cruise. They are engineering
/// values, configurable per scenario.
struct PerformanceEnvelope
{
  AxisTriple v_lo{680.0, -100.0, -42.0};
  AxisTriple v_hi{820.0, 100.0, 42.0};
  AxisTriple u_lo{-2.0, -8.0, -4.0};
  AxisTriple u_hi{2.0, 8.0, 4.0};

  friend bool operator==(const PerformanceEnvelope&,
    const PerformanceEnvelope&) = default;
};

/// Wake hazard region trailing a generator, in course-frame offsets of the
/// protected aircraft relative to the generator. The open box
/// (-behind_len, 0) x (-half_width, half_width) x (-below_depth, above_height)
/// must not be entered.
struct WakeBox
{
  double behind_len = 5000.0;
  double half_width = 100.0;
  double below_depth = 300.0;
  double above_height = 100.0;

  friend bool operator==(const WakeBox&, const WakeBox&) = default;
};

struct SafetyParams
{
  /// Minimum per-axis gap between formation aircraft (at least one axis).
  AxisTriple formation_sep{300.0, 300.0, 100.0};
  /// Minimum per-axis gap to any intruder (at least one axis).
  AxisTriple intruder_sep{1500.0, 1500.0, 600.0};
  WakeBox wake_box{};
  /// Lateral half width of the course, measured from the course centerline.
  double course_half_width = 1000.0;
  /// Per-axis tolerance for "at designated position".
  AxisTriple formation_tol{200.0, 200.0, 50.0};

  friend bool operator==(const SafetyParams&, const SafetyParams&) = default;
};

struct Weights
{
  double w_g = 1.0;   // s^2/ft, maneuver
  double w_h = 0.25;  // 1/ft, drag
  double w_k = 10.0;  // 1/ft, smoothness
  double w_t = 50.0;  // per aircraft-step away from designated position

  friend bool operator==(const Weights&, const Weights&) = default;
};

/// Formation geometry. Aircraft 0 is the lead; slot_offsets[s] is the
/// offset of non-lead slot s from the lead.
struct FormationSpec
{
  std::vector<AxisTriple> slot_offsets;
  std::vector<AxisTriple> initial_positions;
  std::vector<AxisTriple> initial_velocities;

  std::size_t count() const { return initial_positions.size(); }

  friend bool operator==(const FormationSpec&, const FormationSpec&) = default;
};

struct Intruder
{
  AxisTriple initial_position;
  AxisTriple velocity;

  friend bool operator==(const Intruder&, const Intruder&) = default;
};

/// Complete, immutable problem description.
///
/// Time is sampled at steps k = 0 .. steps-1, with step k at k*dt seconds.
/// Step 0 holds the initial state.
struct Scenario
{
  std::string description;
  double dt = 1.0;
  std::size_t steps = 30;
  AxisTriple wind{0.0, 0.0, 0.0};
  FormationSpec formation;
  std::vector<Intruder> intruders;
  PerformanceEnvelope envelope;
  SafetyParams safety;
  Weights weights;
  std::size_t terminal_window = 5;

  std::size_t aircraft_count() const { return formation.count(); }
  std::size_t intruder_count() const { return intruders.size(); }
  double time_at(std::size_t step) const
  {
    return static_cast<double>(step) * dt;
  }
  /// Lateral coordinate of the course centerline (the lead's initial track).
  double course_center() const
  {
    return formation.initial_positions.empty()
      ? 0.0
      : formation.initial_positions.front().lateral();
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Raised by scenario parsing and validation. The message always starts
/// with "schema violation: <path>" or "physics violation: <path>".
class ScenarioError : public std::runtime_error
{
public:
  enum class Kind { Schema, Physics };

  ScenarioError(Kind kind, std::string field_path, const std::string& detail);

  Kind kind() const { return kind_; }
  const std::string& field_path() const { return field_path_; }

private:
  Kind kind_;
  std::string field_path_;
};

/// Parse a scenario JSON document. Unknown keys are rejected; absent keys
/// take their documented defaults.
Scenario parse_scenario(std::string_view config_text);

/// Serialize every field, defaults included, so that parse_scenario of the
/// result reproduces the input exactly.
std::string serialize_scenario(const Scenario& scenario);

/// Check the physical invariants of an already-populated scenario. Throws
/// ScenarioError on the first violation.
void check_scenario(const Scenario& scenario);

} // namespace formation_avoid

#endif // FORMATION_AVOID_SCENARIO_HPP
