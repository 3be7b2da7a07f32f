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
#include <formation_avoid/model_builder.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace formation_avoid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kFaces = 6;

std::string label(const char* prefix, std::initializer_list<std::size_t> idx)
{
  std::string out(prefix);
  bool first = true;
  for (std::size_t v : idx)
  {
    if (!first)
      out += '_';
    out += std::to_string(v + 1);
    first = false;
  }
  return out;
}

/// Big-M that makes a relaxed row redundant. `required` is the largest
/// amount by which the row body can miss its threshold over the bounds box.
double big_m(double required, const MilpParams& params, const std::string& row)
{
  if (!std::isfinite(required))
    throw ModelError("row " + row + ": unbounded body, cannot size big-M");
  const double m = std::max(required, 0.0) + 1.0;
  if (m > params.big_m_cap)
    throw ModelError("row " + row + ": big-M " + std::to_string(m)
      + " exceeds cap " + std::to_string(params.big_m_cap));
  return m;
}

// Row of the form  body + M * z >= threshold  (z = 1 relaxes it).
void add_relaxed_ge(MilpModel& model, LinTerm body, double threshold, VarId z,
  std::string row_label, const MilpParams& params)
{
  const ValueRange range = body_range(model, body);
  const double m = big_m(threshold - range.lo, params, row_label);
  body.add(m, z);
  model.add_constraint(
    LinConstraint{std::move(body), Sense::GreaterEqual, threshold, std::move(row_label)});
}

// Row of the form  body <= threshold + M * (1 - z)  (z = 0 relaxes it).
void add_gated_le(MilpModel& model, LinTerm body, double threshold, VarId z,
  std::string row_label, const MilpParams& params)
{
  const ValueRange range = body_range(model, body);
  const double m = big_m(range.hi - threshold, params, row_label);
  body.add(m, z);
  model.add_constraint(LinConstraint{
    std::move(body), Sense::LessEqual, threshold + m, std::move(row_label)});
}

void add_cardinality(MilpModel& model, const std::vector<VarId>& binaries,
  std::string row_label)
{
  LinTerm sum;
  for (VarId z : binaries)
    sum.add(1.0, z);
  model.add_constraint(LinConstraint{std::move(sum), Sense::LessEqual,
    static_cast<double>(binaries.size()) - 1.0, std::move(row_label)});
}

VarId pos(const MilpModel& m, std::size_t k, std::size_t p, std::size_t d)
{
  return m.id(VarKey::pos(k, p, d));
}

} // namespace

std::size_t ModelCounts::variables() const
{
  return pos_vel_acc + maneuver_slacks + drag_slacks + smooth_slacks + at_place
    + sep_binaries + wake_binaries + intruder_binaries + slot_binaries;
}

std::size_t ModelCounts::rows() const
{
  return dynamics_rows + maneuver_rows + drag_rows + smooth_rows + place_rows
    + separation_rows + wake_rows + intruder_rows + assignment_rows
    + terminal_rows;
}

ModelCounts expected_counts(const Scenario& s)
{
  const std::size_t T = s.steps;
  const std::size_t A = s.aircraft_count();
  const std::size_t N = s.intruder_count();
  const std::size_t S = A - 1;
  const std::size_t W = s.terminal_window;
  ModelCounts c;
  c.pos_vel_acc = 9 * T * A;
  c.maneuver_slacks = 3 * T * A;
  c.drag_slacks = 3 * T * S;
  c.smooth_slacks = (T - 1) * A;
  c.at_place = T * A;
  c.sep_binaries = 3 * T * A * S;
  c.wake_binaries = 6 * T * A * (S + N);
  c.intruder_binaries = 6 * T * A * N;
  c.slot_binaries = S * S;

  c.dynamics_rows = 6 * (T - 1) * A;
  c.maneuver_rows = 6 * T * A;
  c.drag_rows = 6 * T * S * S;
  c.smooth_rows = 2 * (T - 1) * A;
  c.place_rows = 6 * T * A;
  c.separation_rows = 7 * T * A * S / 2;
  c.wake_rows = 7 * T * A * (S + N);
  c.intruder_rows = 7 * T * A * N;
  c.assignment_rows = 2 * S;
  c.terminal_rows = 8 * W * A + 6 * S * S;
  return c;
}

ValueRange body_range(const MilpModel& model, const LinTerm& body)
{
  ValueRange r{body.constant, body.constant};
  for (const auto& [coef, id] : body.terms)
  {
    const Variable& v = model.variable(id);
    if (coef > 0)
    {
      r.lo += coef * v.lb;
      r.hi += coef * v.ub;
    }
    else
    {
      r.lo += coef * v.ub;
      r.hi += coef * v.lb;
    }
  }
  return r;
}

void register_variables(MilpModel& model, const Scenario& s)
{
  const std::size_t T = s.steps;
  const std::size_t A = s.aircraft_count();
  const std::size_t N = s.intruder_count();
  const auto& f = s.formation;

  for (VarKind kind : {VarKind::Pos, VarKind::Vel, VarKind::Acc})
  {
    for (std::size_t k = 0; k < T; ++k)
      for (std::size_t p = 0; p < A; ++p)
        for (std::size_t d = 0; d < kAxes; ++d)
        {
          VarKey key = kind == VarKind::Pos ? VarKey::pos(k, p, d)
            : kind == VarKind::Vel          ? VarKey::vel(k, p, d)
                                            : VarKey::acc(k, p, d);
          double lo = -kInf;
          double hi = kInf;
          if (k == 0 && kind == VarKind::Pos)
            lo = hi = f.initial_positions[p][d];
          if (k == 0 && kind == VarKind::Vel)
            lo = hi = f.initial_velocities[p][d];
          model.add_variable(key, lo, hi, VarType::Continuous);
        }
  }
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t d = 0; d < kAxes; ++d)
        model.add_variable(VarKey::maneuver(k, p, d), 0.0, kInf, VarType::Continuous);
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 1; p < A; ++p)
      for (std::size_t d = 0; d < kAxes; ++d)
        model.add_variable(VarKey::drag(k, p, d), 0.0, kInf, VarType::Continuous);
  for (std::size_t k = 1; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      model.add_variable(VarKey::smooth(k, p), 0.0, kInf, VarType::Continuous);
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      model.add_variable(VarKey::at_place(k, p), 0.0, 1.0, VarType::Binary);
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t q = p + 1; q < A; ++q)
        for (std::size_t d = 0; d < kAxes; ++d)
          for (std::size_t side = 0; side < 2; ++side)
            model.add_variable(VarKey::sep(k, p, q, d, side), 0.0, 1.0, VarType::Binary);
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t g = 0; g < A + N; ++g)
      {
        if (g == p)
          continue;
        for (std::size_t face = 0; face < kFaces; ++face)
          model.add_variable(VarKey::wake(k, p, g, face), 0.0, 1.0, VarType::Binary);
      }
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t d = 0; d < kAxes; ++d)
          for (std::size_t side = 0; side < 2; ++side)
            model.add_variable(
              VarKey::intruder(k, p, r, d, side), 0.0, 1.0, VarType::Binary);
  for (std::size_t p = 1; p < A; ++p)
    for (std::size_t slot = 0; slot + 1 < A; ++slot)
      model.add_variable(VarKey::slot(p, slot), 0.0, 1.0, VarType::Binary);
}

void add_dynamics(MilpModel& model, const Scenario& s)
{
  for (std::size_t k = 0; k + 1 < s.steps; ++k)
    for (std::size_t p = 0; p < s.aircraft_count(); ++p)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        LinTerm x_row;
        x_row.add(1.0, pos(model, k + 1, p, d))
          .add(-1.0, pos(model, k, p, d))
          .add(-s.dt, model.id(VarKey::vel(k, p, d)));
        model.add_constraint(LinConstraint{std::move(x_row), Sense::Equal,
          s.wind[d] * s.dt, label("dyn_x_", {k, p, d})});

        LinTerm v_row;
        v_row.add(1.0, model.id(VarKey::vel(k + 1, p, d)))
          .add(-1.0, model.id(VarKey::vel(k, p, d)))
          .add(-s.dt, model.id(VarKey::acc(k, p, d)));
        model.add_constraint(LinConstraint{
          std::move(v_row), Sense::Equal, 0.0, label("dyn_v_", {k, p, d})});
      }
}

void add_performance_bounds(MilpModel& model, const Scenario& s)
{
  const auto& env = s.envelope;
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
  {
    const ReachableBox box = reachable_box(s, p);
    for (std::size_t k = 0; k < s.steps; ++k)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        if (k > 0)
        {
          model.set_bounds(model.id(VarKey::vel(k, p, d)), env.v_lo[d], env.v_hi[d]);
          model.set_bounds(pos(model, k, p, d), box.pos_lo[k][d], box.pos_hi[k][d]);
        }
        model.set_bounds(model.id(VarKey::acc(k, p, d)), env.u_lo[d], env.u_hi[d]);
      }
  }
}

void add_pairwise_separation(
  MilpModel& model, const Scenario& s, const MilpParams& params)
{
  const std::size_t A = s.aircraft_count();
  const AxisTriple& sep = s.safety.formation_sep;
  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t q = p + 1; q < A; ++q)
      {
        std::vector<VarId> binaries;
        for (std::size_t d = 0; d < kAxes; ++d)
          for (std::size_t side = 0; side < 2; ++side)
          {
            const double sign = side == 0 ? 1.0 : -1.0;
            LinTerm body;
            body.add(sign, pos(model, k, p, d)).add(-sign, pos(model, k, q, d));
            const VarId z = model.id(VarKey::sep(k, p, q, d, side));
            add_relaxed_ge(model, std::move(body), sep[d], z,
              label("sep_row_", {k, p, q, d, side}), params);
            binaries.push_back(z);
          }
        add_cardinality(model, binaries, label("sep_card_", {k, p, q}));
      }
}

void add_wake_avoidance(
  MilpModel& model, const Scenario& s, const MilpParams& params)
{
  const std::size_t A = s.aircraft_count();
  const std::size_t N = s.intruder_count();
  const WakeBox& box = s.safety.wake_box;
  const auto intruders = intruder_positions(s);
  // Face f: sign * rel[axis] >= threshold, rel = protected - generator.
  struct Face
  {
    std::size_t axis;
    double sign;
    double threshold;
  };
  const std::array<Face, kFaces> faces{{
    {0, 1.0, 0.0},
    {0, -1.0, box.behind_len},
    {1, 1.0, box.half_width},
    {1, -1.0, box.half_width},
    {2, 1.0, box.above_height},
    {2, -1.0, box.below_depth},
  }};

  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t g = 0; g < A + N; ++g)
      {
        if (g == p)
          continue;
        std::vector<VarId> binaries;
        for (std::size_t f = 0; f < kFaces; ++f)
        {
          const Face& face = faces[f];
          LinTerm body;
          body.add(face.sign, pos(model, k, p, face.axis));
          if (g < A)
            body.add(-face.sign, pos(model, k, g, face.axis));
          else
            body.constant = -face.sign * intruders[g - A][k][face.axis];
          const VarId z = model.id(VarKey::wake(k, p, g, f));
          add_relaxed_ge(model, std::move(body), face.threshold, z,
            label("wake_row_", {k, p, g, f}), params);
          binaries.push_back(z);
        }
        add_cardinality(model, binaries, label("wake_card_", {k, p, g}));
      }
}

void add_intruder_separation(
  MilpModel& model, const Scenario& s, const MilpParams& params)
{
  const AxisTriple& sep = s.safety.intruder_sep;
  const auto intruders = intruder_positions(s);
  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < s.aircraft_count(); ++p)
      for (std::size_t r = 0; r < s.intruder_count(); ++r)
      {
        std::vector<VarId> binaries;
        for (std::size_t d = 0; d < kAxes; ++d)
          for (std::size_t side = 0; side < 2; ++side)
          {
            const double sign = side == 0 ? 1.0 : -1.0;
            LinTerm body;
            body.add(sign, pos(model, k, p, d));
            body.constant = -sign * intruders[r][k][d];
            const VarId z = model.id(VarKey::intruder(k, p, r, d, side));
            add_relaxed_ge(model, std::move(body), sep[d], z,
              label("intr_row_", {k, p, r, d, side}), params);
            binaries.push_back(z);
          }
        add_cardinality(model, binaries, label("intr_card_", {k, p, r}));
      }
}

void add_slot_assignment(MilpModel& model, const Scenario& s)
{
  const std::size_t A = s.aircraft_count();
  if (A < 2)
    return;
  for (std::size_t p = 1; p < A; ++p)
  {
    LinTerm row;
    for (std::size_t slot = 0; slot + 1 < A; ++slot)
      row.add(1.0, model.id(VarKey::slot(p, slot)));
    model.add_constraint(LinConstraint{
      std::move(row), Sense::Equal, 1.0, label("assign_ac_", {p})});
  }
  for (std::size_t slot = 0; slot + 1 < A; ++slot)
  {
    LinTerm row;
    for (std::size_t p = 1; p < A; ++p)
      row.add(1.0, model.id(VarKey::slot(p, slot)));
    model.add_constraint(LinConstraint{
      std::move(row), Sense::Equal, 1.0, label("assign_slot_", {slot})});
  }
}

void add_terminal_constraints(
  MilpModel& model, const Scenario& s, const MilpParams& params)
{
  const std::size_t A = s.aircraft_count();
  const std::size_t T = s.steps;
  const double center = s.course_center();
  const double half_width = s.safety.course_half_width;
  const AxisTriple cruise{s.formation.initial_velocities.front().along(), 0.0, 0.0};

  for (std::size_t k = T - s.terminal_window; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        LinTerm v;
        v.add(1.0, model.id(VarKey::vel(k, p, d)));
        model.add_constraint(LinConstraint{
          std::move(v), Sense::Equal, cruise[d], label("term_vel_", {k, p, d})});
      }
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        LinTerm u;
        u.add(1.0, model.id(VarKey::acc(k, p, d)));
        model.add_constraint(LinConstraint{
          std::move(u), Sense::Equal, 0.0, label("term_acc_", {k, p, d})});
      }
      LinTerm right;
      right.add(1.0, pos(model, k, p, 1));
      model.add_constraint(LinConstraint{std::move(right), Sense::LessEqual,
        center + half_width, label("term_lat_", {k, p, 0})});
      LinTerm left;
      left.add(-1.0, pos(model, k, p, 1));
      model.add_constraint(LinConstraint{std::move(left), Sense::LessEqual,
        -(center - half_width), label("term_lat_", {k, p, 1})});
    }

  const std::size_t last = T - 1;
  const AxisTriple& tol = s.safety.formation_tol;
  for (std::size_t p = 1; p < A; ++p)
    for (std::size_t slot = 0; slot + 1 < A; ++slot)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const double offset = s.formation.slot_offsets[slot][d];
        const VarId y = model.id(VarKey::slot(p, slot));
        for (std::size_t side = 0; side < 2; ++side)
        {
          const double sign = side == 0 ? 1.0 : -1.0;
          LinTerm body;
          body.add(sign, pos(model, last, p, d)).add(-sign, pos(model, last, 0, d));
          body.constant = -sign * offset;
          add_gated_le(model, std::move(body), tol[d], y,
            label("term_form_", {p, slot, d, side}), params);
        }
      }
}

void add_objective(MilpModel& model, const Scenario& s, const MilpParams& params)
{
  const std::size_t A = s.aircraft_count();
  const std::size_t T = s.steps;
  const auto& w = s.weights;

  // Maneuver: g >= |u|.
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const VarId g = model.id(VarKey::maneuver(k, p, d));
        const VarId u = model.id(VarKey::acc(k, p, d));
        const Variable& uv = model.variable(u);
        model.set_bounds(g, 0.0, std::max(std::abs(uv.lb), std::abs(uv.ub)));
        for (std::size_t side = 0; side < 2; ++side)
        {
          LinTerm row;
          row.add(1.0, g).add(side == 0 ? -1.0 : 1.0, u);
          model.add_constraint(LinConstraint{std::move(row), Sense::GreaterEqual,
            0.0, label("man_", {k, p, d, side})});
        }
        model.add_objective(w.w_g, g);
      }

  // Smoothness: k >= |x3(i) - x3(i-1)|.
  for (std::size_t k = 1; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      const VarId slack = model.id(VarKey::smooth(k, p));
      LinTerm delta;
      delta.add(1.0, pos(model, k, p, 2)).add(-1.0, pos(model, k - 1, p, 2));
      const ValueRange range = body_range(model, delta);
      model.set_bounds(slack, 0.0, std::max(std::abs(range.lo), std::abs(range.hi)));
      for (std::size_t side = 0; side < 2; ++side)
      {
        const double sign = side == 0 ? -1.0 : 1.0;
        LinTerm row;
        row.add(1.0, slack)
          .add(sign, pos(model, k, p, 2))
          .add(-sign, pos(model, k - 1, p, 2));
        model.add_constraint(LinConstraint{std::move(row), Sense::GreaterEqual,
          0.0, label("smooth_", {k, p, side})});
      }
      model.add_objective(w.w_k, slack);
    }

  // Drag: h >= |x_p - x_lead - offset(slot)| for the assigned slot.
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 1; p < A; ++p)
    {
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const VarId h = model.id(VarKey::drag(k, p, d));
        double h_max = 0.0;
        for (std::size_t slot = 0; slot + 1 < A; ++slot)
        {
          LinTerm dev;
          dev.add(1.0, pos(model, k, p, d)).add(-1.0, pos(model, k, 0, d));
          dev.constant = -s.formation.slot_offsets[slot][d];
          const ValueRange range = body_range(model, dev);
          h_max = std::max({h_max, std::abs(range.lo), std::abs(range.hi)});
        }
        model.set_bounds(h, 0.0, h_max);
        model.add_objective(w.w_h, h);
      }
      for (std::size_t slot = 0; slot + 1 < A; ++slot)
        for (std::size_t d = 0; d < kAxes; ++d)
        {
          const VarId h = model.id(VarKey::drag(k, p, d));
          const VarId y = model.id(VarKey::slot(p, slot));
          for (std::size_t side = 0; side < 2; ++side)
          {
            // sign*dev - h <= M (1 - y)
            const double sign = side == 0 ? 1.0 : -1.0;
            LinTerm body;
            body.add(sign, pos(model, k, p, d))
              .add(-sign, pos(model, k, 0, d))
              .add(-1.0, h);
            body.constant = -sign * s.formation.slot_offsets[slot][d];
            add_gated_le(model, std::move(body), 0.0, y,
              label("drag_", {k, p, slot, d, side}), params);
          }
        }
    }

  // Placement: b = 1 only if within formation_tol of the designated position.
  const auto designated = designated_track(s);
  const AxisTriple& tol = s.safety.formation_tol;
  for (std::size_t k = 0; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      const VarId b = model.id(VarKey::at_place(k, p));
      for (std::size_t d = 0; d < kAxes; ++d)
        for (std::size_t side = 0; side < 2; ++side)
        {
          const double sign = side == 0 ? 1.0 : -1.0;
          LinTerm body;
          body.add(sign, pos(model, k, p, d));
          body.constant = -sign * designated[k][p][d];
          add_gated_le(model, std::move(body), tol[d], b,
            label("place_", {k, p, d, side}), params);
        }
      model.add_objective(-w.w_t, b);
      model.add_objective_constant(w.w_t);
    }
}

MilpModel build_model(const Scenario& s, const MilpParams& params)
{
  check_scenario(s);
  if (s.steps * s.aircraft_count() > params.max_aircraft_steps)
    throw ModelError("model too large: steps * aircraft = "
      + std::to_string(s.steps * s.aircraft_count()) + " exceeds the cap of "
      + std::to_string(params.max_aircraft_steps));

  MilpModel model;
  register_variables(model, s);
  add_performance_bounds(model, s);
  add_dynamics(model, s);
  add_pairwise_separation(model, s, params);
  add_wake_avoidance(model, s, params);
  add_intruder_separation(model, s, params);
  add_slot_assignment(model, s);
  add_terminal_constraints(model, s, params);
  add_objective(model, s, params);
  return model;
}

} // namespace formation_avoid
