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

#ifndef FORMATION_AVOID_TOOLS_SWEEP_HPP
#define FORMATION_AVOID_TOOLS_SWEEP_HPP

#include <formation_avoid/scenario.hpp>
#include <formation_avoid/solver.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formation_avoid::cli {

class SweepSpecError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Grid over one intruder's initial state. Axes absent from the JSON take a
/// single value from the base scenario; an explicitly empty axis yields an
/// empty grid.
///
///   {"intruder": 1, "along_ft": [...], "lateral_ft": [...],
///    "heading_deg": [...], "speed_fps": [...], "steps": 20}
///
/// heading_deg is the direction of travel in the x1-x2 plane, measured from
/// +x1 toward +x2. When neither heading nor speed is swept, the base
/// velocity is used verbatim.
struct SweepSpec
{
  std::size_t intruder = 0;
  std::vector<double> along_ft;
  std::vector<double> lateral_ft;
  std::vector<double> heading_deg;
  std::vector<double> speed_fps;
  bool sweeps_velocity = false;
  std::optional<std::size_t> steps;
};

SweepSpec parse_sweep_spec(std::string_view text, const Scenario& base);

struct SweepCell
{
  double along_ft = 0.0;
  double lateral_ft = 0.0;
  double heading_deg = 0.0;
  double speed_fps = 0.0;
};

/// Row-major over (along, lateral, heading, speed), speed fastest.
std::vector<SweepCell> enumerate_cells(const SweepSpec& spec);

Scenario apply_cell(const Scenario& base, const SweepSpec& spec, const SweepCell& cell);

struct SweepResult
{
  /// SolveStatus name, or InvalidCell / BackendError.
  std::string status;
  std::optional<double> objective;
  std::optional<double> relative_gap;
  std::optional<double> maneuver;
  std::string detail;

  bool feasible() const { return objective.has_value(); }
};

/// Solves every cell independently on up to `jobs` threads; results are in
/// cell order. A failing cell never stops the others.
std::vector<SweepResult> run_sweep(const Scenario& base, const SweepSpec& spec,
  const std::vector<SweepCell>& cells, const SolveOptions& options, std::size_t jobs);

std::string sweep_table_csv(
  const std::vector<SweepCell>& cells, const std::vector<SweepResult>& results);

} // namespace formation_avoid::cli

#endif // FORMATION_AVOID_TOOLS_SWEEP_HPP
