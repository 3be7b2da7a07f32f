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

#ifndef FORMATION_AVOID_ORACLE_HPP
#define FORMATION_AVOID_ORACLE_HPP

#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace formation_avoid {

inline constexpr double kOracleSearchCap = 1e7;

struct OracleResult
{
  /// Empty when no grid sequence is feasible.
  std::optional<double> best_cost;
  TrajectorySet trajectory;
  std::uint64_t nodes_explored = 0;
  std::uint64_t feasible_count = 0;
};

class OracleError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive search over acceleration sequences whose entries on `axes`
/// (0-based) take values from `levels` for steps 0..T-2; every other entry,
/// and the final step, is zero. Each sequence is integrated from the initial
/// state, kept only if validate() passes, and scored with
/// recompute_objective(). Ties go to the lexicographically smallest sequence
/// (step-major, then aircraft, then axis, levels compared numerically).
/// Throws OracleError for empty levels, bad axes, or a search size above
/// kOracleSearchCap.
OracleResult brute_force_plan(const Scenario& s, std::vector<double> levels,
  const std::vector<std::size_t>& axes);

/// Zero-order-hold integration of accelerations[k][p] from the initial
/// state; intruders follow their constant velocity.
TrajectorySet integrate_plan(
  const Scenario& s, const std::vector<std::vector<AxisTriple>>& accelerations);

} // namespace formation_avoid

#endif // FORMATION_AVOID_ORACLE_HPP
