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

#ifndef FORMATION_AVOID_MODEL_BUILDER_HPP
#define FORMATION_AVOID_MODEL_BUILDER_HPP

#include <formation_avoid/milp_model.hpp>
#include <formation_avoid/scenario.hpp>

#include <cstddef>

namespace formation_avoid {

struct MilpParams
{
  /// Every big-M is (required value + 1); a required value above the cap
  /// is a build error rather than a silently weak row.
  double big_m_cap = 1e5;
  /// Upper limit on steps * aircraft.
  std::size_t max_aircraft_steps = 4000;
  double gap_tolerance = 0.01;
  double time_limit_s = 900.0;
};

/// Closed-form sizes of the model built from a scenario, with
/// T = steps, A = aircraft, N = intruders, S = A - 1, W = terminal_window:
///
///   variables                       rows
///   x, v, u      3 * 3 T A          dynamics     6 (T-1) A
///   g            3 T A              maneuver     6 T A
///   h            3 T S              drag         6 T S^2
///   k            (T-1) A            smoothness   2 (T-1) A
///   b            T A                placement    6 T A
///   sep          3 T A (A-1)        separation   7 T A (A-1) / 2
///   wk           6 T A (A-1+N)      wake         7 T A (A-1+N)
///   a            6 T A N            intruder     7 T A N
///   y            S^2                assignment   2 S
///                                   terminal     8 W A + 6 S^2
struct ModelCounts
{
  std::size_t pos_vel_acc = 0;
  std::size_t maneuver_slacks = 0;
  std::size_t drag_slacks = 0;
  std::size_t smooth_slacks = 0;
  std::size_t at_place = 0;
  std::size_t sep_binaries = 0;
  std::size_t wake_binaries = 0;
  std::size_t intruder_binaries = 0;
  std::size_t slot_binaries = 0;

  std::size_t dynamics_rows = 0;
  std::size_t maneuver_rows = 0;
  std::size_t drag_rows = 0;
  std::size_t smooth_rows = 0;
  std::size_t place_rows = 0;
  std::size_t separation_rows = 0;
  std::size_t wake_rows = 0;
  std::size_t intruder_rows = 0;
  std::size_t assignment_rows = 0;
  std::size_t terminal_rows = 0;

  std::size_t variables() const;
  std::size_t rows() const;
};

ModelCounts expected_counts(const Scenario& scenario);

/// Row label prefixes, one per constraint family.
namespace row_prefix {
inline constexpr const char* kDynamics = "dyn_";
inline constexpr const char* kSeparation = "sep_";
inline constexpr const char* kWake = "wake_";
inline constexpr const char* kIntruder = "intr_";
inline constexpr const char* kAssignment = "assign_";
inline constexpr const char* kTerminal = "term_";
inline constexpr const char* kManeuver = "man_";
inline constexpr const char* kSmooth = "smooth_";
inline constexpr const char* kDrag = "drag_";
inline constexpr const char* kPlace = "place_";
} // namespace row_prefix

/// Registers every variable family. Step-0 positions and velocities are
/// fixed to the initial state; other continuous variables start unbounded
/// until add_performance_bounds / add_objective bound them.
void register_variables(MilpModel& model, const Scenario& s);

void add_dynamics(MilpModel& model, const Scenario& s);

/// Envelope boxes on velocity and acceleration; per-step reachable boxes on
/// position.
void add_performance_bounds(MilpModel& model, const Scenario& s);

// The remaining families derive their big-M values from the current
// variable bounds, so they must run after add_performance_bounds.
void add_pairwise_separation(
  MilpModel& model, const Scenario& s, const MilpParams& params);
void add_wake_avoidance(
  MilpModel& model, const Scenario& s, const MilpParams& params);
void add_intruder_separation(
  MilpModel& model, const Scenario& s, const MilpParams& params);
void add_slot_assignment(MilpModel& model, const Scenario& s);
void add_terminal_constraints(
  MilpModel& model, const Scenario& s, const MilpParams& params);
void add_objective(MilpModel& model, const Scenario& s, const MilpParams& params);

/// Full model in a fixed family order. Deterministic: equal inputs give
/// byte-identical canonical serializations.
MilpModel build_model(const Scenario& s, const MilpParams& params = {});

/// Smallest and largest value of the row body over the variable bounds.
struct ValueRange
{
  double lo = 0.0;
  double hi = 0.0;
};
ValueRange body_range(const MilpModel& model, const LinTerm& body);

} // namespace formation_avoid

#endif // FORMATION_AVOID_MODEL_BUILDER_HPP
