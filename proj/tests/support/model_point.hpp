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

// Completes a model point from a trajectory without consulting the solver:
// slot binaries take the identity assignment, disjunction binaries are
// cleared whenever their own row already holds, placement binaries are set
// whenever their rows allow it, and each slack takes the smallest value its
// rows permit.

#ifndef FORMATION_AVOID_TESTS_MODEL_POINT_HPP
#define FORMATION_AVOID_TESTS_MODEL_POINT_HPP

#include <formation_avoid/milp_model.hpp>
#include <formation_avoid/trajectory.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace formation_avoid::testing {

inline bool row_holds(const MilpModel& m, const LinConstraint& row,
  const std::vector<double>& x, double tol = 1e-7)
{
  const double act = m.evaluate_row(row, x);
  const double slack = tol * (1.0 + std::abs(row.rhs));
  switch (row.sense)
  {
    case Sense::LessEqual: return act <= row.rhs + slack;
    case Sense::GreaterEqual: return act >= row.rhs - slack;
    case Sense::Equal: return std::abs(act - row.rhs) <= slack;
  }
  return false;
}

/// Labels of the rows that fail at `x`.
inline std::vector<std::string> violated_rows(const MilpModel& m,
  const std::vector<double>& x, double tol = 1e-7)
{
  std::vector<std::string> out;
  for (const LinConstraint& row : m.constraints())
    if (!row_holds(m, row, x, tol))
      out.push_back(row.label);
  return out;
}

inline std::vector<double> complete_point(const MilpModel& m, const TrajectorySet& traj)
{
  const auto& vars = m.variables();
  std::vector<double> x(vars.size(), 0.0);
  std::vector<std::vector<std::size_t>> rows_of(vars.size());
  for (std::size_t r = 0; r < m.constraints().size(); ++r)
    for (const auto& [c, id] : m.constraints()[r].lhs.terms)
      rows_of[id.value].push_back(r);

  for (std::size_t j = 0; j < vars.size(); ++j)
  {
    const VarKey& key = vars[j].key;
    const StateSample* st = nullptr;
    if (key.kind == VarKind::Pos || key.kind == VarKind::Vel || key.kind == VarKind::Acc)
      st = &traj.aircraft[key.a][key.step];
    switch (key.kind)
    {
      case VarKind::Pos: x[j] = st->position[key.axis]; break;
      case VarKind::Vel: x[j] = st->velocity[key.axis]; break;
      case VarKind::Acc: x[j] = st->acceleration[key.axis]; break;
      case VarKind::SlotAssign: x[j] = key.a == key.b + 1 ? 1.0 : 0.0; break;
      default: break;
    }
  }

  auto rows_hold = [&](std::size_t j) {
    for (std::size_t r : rows_of[j])
    {
      const LinConstraint& row = m.constraints()[r];
      const bool has_continuous = std::any_of(row.lhs.terms.begin(), row.lhs.terms.end(),
        [&](const auto& t) { return vars[t.second.value].type == VarType::Continuous; });
      if (has_continuous && !row_holds(m, row, x))
        return false;
    }
    return true;
  };

  for (std::size_t j = 0; j < vars.size(); ++j)
  {
    const VarKind kind = vars[j].key.kind;
    if (kind == VarKind::Sep || kind == VarKind::Wake || kind == VarKind::IntruderSep)
    {
      x[j] = 0.0;
      if (!rows_hold(j))
        x[j] = 1.0;
    }
    else if (kind == VarKind::AtPlace)
    {
      x[j] = 1.0;
      if (!rows_hold(j))
        x[j] = 0.0;
    }
  }

  for (std::size_t j = 0; j < vars.size(); ++j)
  {
    const VarKind kind = vars[j].key.kind;
    if (kind != VarKind::ManeuverSlack && kind != VarKind::DragSlack
      && kind != VarKind::SmoothSlack)
      continue;
    double need = vars[j].lb;
    for (std::size_t r : rows_of[j])
    {
      const LinConstraint& row = m.constraints()[r];
      double coef = 0.0;
      for (const auto& [c, id] : row.lhs.terms)
        if (static_cast<std::size_t>(id.value) == j)
          coef = c;
      x[j] = 0.0;
      const double rest = m.evaluate_row(row, x);
      // coef * s + rest (sense) rhs, solved for the smallest admissible s.
      if (row.sense == Sense::LessEqual && coef < 0.0)
        need = std::max(need, (row.rhs - rest) / coef);
      else if (row.sense == Sense::GreaterEqual && coef > 0.0)
        need = std::max(need, (row.rhs - rest) / coef);
    }
    x[j] = need;
  }
  return x;
}

} // namespace formation_avoid::testing

#endif // FORMATION_AVOID_TESTS_MODEL_POINT_HPP
