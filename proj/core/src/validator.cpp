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

#include <formation_avoid/validator.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace formation_avoid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class FamilyAccumulator
{
public:
  explicit FamilyAccumulator(FamilyResult& out, double tolerance) : out_(out)
  {
    out_.tolerance = tolerance;
  }

  void record(double residual, std::size_t step, std::size_t aircraft,
    std::optional<std::size_t> axis = std::nullopt,
    std::optional<std::string> other = std::nullopt)
  {
    ++out_.checks;
    const ResidualLocation here{step, aircraft, axis, std::move(other)};
    if (residual < -out_.tolerance || !std::isfinite(residual))
    {
      ++out_.violations;
      if (!out_.first_violation)
        out_.first_violation = here;
    }
    if (!out_.worst_residual || residual < *out_.worst_residual)
    {
      out_.worst_residual = residual;
      out_.worst_location = here;
    }
  }

private:
  FamilyResult& out_;
};

void check_shape(const TrajectorySet& traj, const Scenario& s)
{
  if (traj.aircraft.size() != s.aircraft_count())
    throw ValidationError("trajectory has " + std::to_string(traj.aircraft.size())
      + " aircraft, scenario has " + std::to_string(s.aircraft_count()));
  if (traj.intruders.size() != s.intruder_count())
    throw ValidationError("trajectory has " + std::to_string(traj.intruders.size())
      + " intruders, scenario has " + std::to_string(s.intruder_count()));
  auto check = [&](const Track& t, const std::string& id) {
    if (t.size() != s.steps)
      throw ValidationError("track " + id + " has " + std::to_string(t.size())
        + " steps, scenario has " + std::to_string(s.steps));
  };
  for (std::size_t p = 0; p < traj.aircraft.size(); ++p)
    check(traj.aircraft[p], aircraft_id(p));
  for (std::size_t r = 0; r < traj.intruders.size(); ++r)
    check(traj.intruders[r], intruder_id(r));
  if (std::abs(traj.dt - s.dt) > 1e-12 * std::max(1.0, s.dt))
    throw ValidationError("trajectory dt differs from scenario dt");
}

void check_dynamics(const TrajectorySet& traj, const Scenario& s, FamilyResult& out)
{
  FamilyAccumulator acc(out, kDynamicsTolerance);
  for (std::size_t p = 0; p < traj.aircraft.size(); ++p)
  {
    const Track& t = traj.aircraft[p];
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      acc.record(-std::abs(t[0].position[d] - s.formation.initial_positions[p][d]), 0, p, d);
      acc.record(-std::abs(t[0].velocity[d] - s.formation.initial_velocities[p][d]), 0, p, d);
    }
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const double rx = t[k + 1].position[d] - t[k].position[d]
          - s.dt * t[k].velocity[d] - s.dt * s.wind[d];
        const double rv = t[k + 1].velocity[d] - t[k].velocity[d] - s.dt * t[k].acceleration[d];
        acc.record(-std::abs(rx), k + 1, p, d);
        acc.record(-std::abs(rv), k + 1, p, d);
      }
  }
}

void check_envelope(const TrajectorySet& traj, const Scenario& s, FamilyResult& out)
{
  FamilyAccumulator acc(out, kEnvelopeTolerance);
  const auto& env = s.envelope;
  for (std::size_t p = 0; p < traj.aircraft.size(); ++p)
    for (std::size_t k = 0; k < s.steps; ++k)
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const StateSample& st = traj.aircraft[p][k];
        acc.record(std::min(st.velocity[d] - env.v_lo[d], env.v_hi[d] - st.velocity[d]), k, p, d);
        acc.record(std::min(st.acceleration[d] - env.u_lo[d],
          env.u_hi[d] - st.acceleration[d]), k, p, d);
      }
}

// max_d(|a_d - b_d| - min_d) with the axis attaining it.
std::pair<double, std::size_t> separation_margin(
  const AxisTriple& a, const AxisTriple& b, const AxisTriple& min_sep)
{
  double best = -kInf;
  std::size_t axis = 0;
  for (std::size_t d = 0; d < kAxes; ++d)
  {
    const double m = std::abs(a[d] - b[d]) - min_sep[d];
    if (m > best)
    {
      best = m;
      axis = d;
    }
  }
  return {best, axis};
}

void check_separation(const TrajectorySet& traj, const Scenario& s,
  FamilyResult& formation, FamilyResult& intruder)
{
  FamilyAccumulator fa(formation, kSeparationTolerance);
  FamilyAccumulator ia(intruder, kSeparationTolerance);
  const std::size_t A = traj.aircraft.size();
  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      const AxisTriple& xp = traj.aircraft[p][k].position;
      for (std::size_t q = p + 1; q < A; ++q)
      {
        const auto [m, axis] =
          separation_margin(xp, traj.aircraft[q][k].position, s.safety.formation_sep);
        fa.record(m, k, p, axis, aircraft_id(q));
      }
      for (std::size_t r = 0; r < traj.intruders.size(); ++r)
      {
        const auto [m, axis] =
          separation_margin(xp, traj.intruders[r][k].position, s.safety.intruder_sep);
        ia.record(m, k, p, axis, intruder_id(r));
      }
    }
}

void check_wake(const TrajectorySet& traj, const Scenario& s, FamilyResult& out)
{
  FamilyAccumulator acc(out, kSeparationTolerance);
  const WakeBox& box = s.safety.wake_box;
  // Margin of rel = protected - generator outside each face of the box.
  auto margin = [&](const AxisTriple& rel) {
    const std::array<std::pair<double, std::size_t>, 6> faces{{
      {rel[0], 0},
      {-rel[0] - box.behind_len, 0},
      {rel[1] - box.half_width, 1},
      {-rel[1] - box.half_width, 1},
      {rel[2] - box.above_height, 2},
      {-rel[2] - box.below_depth, 2},
    }};
    return *std::max_element(faces.begin(), faces.end(),
      [](const auto& x, const auto& y) { return x.first < y.first; });
  };
  const std::size_t A = traj.aircraft.size();
  for (std::size_t k = 0; k < s.steps; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      const AxisTriple& xp = traj.aircraft[p][k].position;
      for (std::size_t g = 0; g < A; ++g)
      {
        if (g == p)
          continue;
        const auto [m, axis] = margin(xp - traj.aircraft[g][k].position);
        acc.record(m, k, p, axis, aircraft_id(g));
      }
      for (std::size_t r = 0; r < traj.intruders.size(); ++r)
      {
        const auto [m, axis] = margin(xp - traj.intruders[r][k].position);
        acc.record(m, k, p, axis, intruder_id(r));
      }
    }
}

void check_terminal(const TrajectorySet& traj, const Scenario& s,
  FamilyResult& terminal, FamilyResult& course)
{
  FamilyAccumulator ta(terminal, kEnvelopeTolerance);
  FamilyAccumulator ca(course, kSeparationTolerance);
  const std::size_t A = traj.aircraft.size();
  const std::size_t T = s.steps;
  const AxisTriple cruise{s.formation.initial_velocities.front().along(), 0.0, 0.0};
  const double center = s.course_center();
  for (std::size_t k = T - s.terminal_window; k < T; ++k)
    for (std::size_t p = 0; p < A; ++p)
    {
      const StateSample& st = traj.aircraft[p][k];
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        ta.record(-std::abs(st.velocity[d] - cruise[d]), k, p, d);
        ta.record(-std::abs(st.acceleration[d]), k, p, d);
      }
      ca.record(s.safety.course_half_width - std::abs(st.position[1] - center), k, p, 1);
    }

  // Final formation: the best assignment is the one maximizing the smallest
  // per-axis margin tol_d - |deviation_d| (bottleneck DP over slot subsets).
  const std::size_t S = A > 0 ? A - 1 : 0;
  if (S == 0)
    return;
  const std::size_t last = T - 1;
  const AxisTriple& lead = traj.aircraft[0][last].position;
  const AxisTriple& tol = s.safety.formation_tol;
  // margin[p][slot] and the axis attaining it.
  std::vector<std::vector<std::pair<double, std::size_t>>> margin(
    S, std::vector<std::pair<double, std::size_t>>(S));
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t slot = 0; slot < S; ++slot)
    {
      double worst = kInf;
      std::size_t axis = 0;
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        const double dev = traj.aircraft[i + 1][last].position[d] - lead[d]
          - s.formation.slot_offsets[slot][d];
        const double m = tol[d] - std::abs(dev);
        if (m < worst)
        {
          worst = m;
          axis = d;
        }
      }
      margin[i][slot] = {worst, axis};
    }
  if (S > 20)
    throw ValidationError("final formation check supports at most 21 aircraft");
  const std::size_t full = (std::size_t{1} << S) - 1;
  std::vector<double> best(full + 1, -kInf);
  std::vector<std::size_t> choice(full + 1, 0);
  best[0] = kInf;
  for (std::size_t mask = 0; mask < full; ++mask)
  {
    if (best[mask] == -kInf)
      continue;
    const std::size_t i = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t slot = 0; slot < S; ++slot)
    {
      if (mask & (std::size_t{1} << slot))
        continue;
      const std::size_t next = mask | (std::size_t{1} << slot);
      const double value = std::min(best[mask], margin[i][slot].first);
      if (value > best[next])
      {
        best[next] = value;
        choice[next] = slot;
      }
    }
  }
  std::vector<std::size_t> slot_of(S);
  std::size_t mask = full;
  for (std::size_t i = S; i-- > 0;)
  {
    slot_of[i] = choice[mask];
    mask &= ~(std::size_t{1} << choice[mask]);
  }
  for (std::size_t i = 0; i < S; ++i)
    ta.record(margin[i][slot_of[i]].first, last, i + 1, margin[i][slot_of[i]].second,
      "slot " + std::to_string(slot_of[i] + 1));
}

nlohmann::json number_or_null(double v)
{
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json violation_json(const SubStepViolation& v)
{
  return {{"time_s", number_or_null(v.time_s)}, {"onset_s", number_or_null(v.onset_s)},
    {"gaps_ft", {number_or_null(v.gaps[0]), number_or_null(v.gaps[1]),
      number_or_null(v.gaps[2])}}};
}

} // namespace

std::string_view family_key(CheckFamily family)
{
  switch (family)
  {
    case CheckFamily::Dynamics:
      return "dynamics";
    case CheckFamily::Envelope:
      return "envelope";
    case CheckFamily::FormationSeparation:
      return "formation_separation";
    case CheckFamily::IntruderSeparation:
      return "intruder_separation";
    case CheckFamily::Wake:
      return "wake";
    case CheckFamily::Terminal:
      return "terminal";
    case CheckFamily::CourseBounds:
      break;
  }
  return "course_bounds";
}

bool ValidationReport::pass() const
{
  return std::all_of(families.begin(), families.end(),
    [](const FamilyResult& f) { return f.pass(); });
}

InterpolatedSeparation interpolated_min_separation(const Track& a, const Track& b,
  double dt, const AxisTriple& min_sep, std::size_t samples_per_step)
{
  if (samples_per_step < 2)
    throw std::invalid_argument("samples_per_step must be at least 2");
  if (a.size() != b.size())
    throw std::invalid_argument("tracks differ in length");

  InterpolatedSeparation out;
  out.min_gaps = AxisTriple{kInf, kInf, kInf};
  const std::size_t n = a.size();
  auto gaps_at = [&](std::size_t k, double tau) {
    AxisTriple g;
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      const double pa = a[k].position[d]
        + (k + 1 < n ? tau * (a[k + 1].position[d] - a[k].position[d]) : 0.0);
      const double pb = b[k].position[d]
        + (k + 1 < n ? tau * (b[k + 1].position[d] - b[k].position[d]) : 0.0);
      g[d] = pa - pb;
    }
    return g;
  };
  auto sample = [&](std::size_t k, double tau) {
    const AxisTriple g = gaps_at(k, tau);
    double margin = -kInf;
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      out.min_gaps[d] = std::min(out.min_gaps[d], std::abs(g[d]));
      margin = std::max(margin, std::abs(g[d]) - min_sep[d]);
    }
    if (margin < -kSeparationTolerance)
    {
      const double t = (static_cast<double>(k) + tau) * dt;
      out.sampled.push_back(SubStepViolation{t, t, g});
    }
  };

  if (n == 0)
    return out;
  sample(0, 0.0);
  const double last = static_cast<double>(samples_per_step - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
  {
    for (std::size_t j = 1; j < samples_per_step; ++j)
      sample(k, static_cast<double>(j) / last);

    // Exact: intersect, over axes, the tau-interval where |gap| < reach.
    double lo = 0.0;
    double hi = 1.0;
    const AxisTriple g0 = gaps_at(k, 0.0);
    const AxisTriple g1 = gaps_at(k, 1.0);
    for (std::size_t d = 0; d < kAxes && lo < hi; ++d)
    {
      const double reach = min_sep[d] - kSeparationTolerance;
      const double slope = g1[d] - g0[d];
      if (slope == 0.0)
      {
        if (std::abs(g0[d]) >= reach)
          hi = lo;
        continue;
      }
      double t1 = (-reach - g0[d]) / slope;
      double t2 = (reach - g0[d]) / slope;
      if (t1 > t2)
        std::swap(t1, t2);
      lo = std::max(lo, t1);
      hi = std::min(hi, t2);
    }
    if (hi - lo > 1e-12)
    {
      const double mid = 0.5 * (lo + hi);
      out.exact.push_back(SubStepViolation{(static_cast<double>(k) + mid) * dt,
        (static_cast<double>(k) + lo) * dt, gaps_at(k, mid)});
    }
  }
  return out;
}

ValidationReport validate(
  const TrajectorySet& traj, const Scenario& s, const ValidateOptions& options)
{
  check_shape(traj, s);
  ValidationReport report;
  auto fam = [&](CheckFamily f) -> FamilyResult& {
    return report.families[static_cast<std::size_t>(f)];
  };
  check_dynamics(traj, s, fam(CheckFamily::Dynamics));
  check_envelope(traj, s, fam(CheckFamily::Envelope));
  check_separation(
    traj, s, fam(CheckFamily::FormationSeparation), fam(CheckFamily::IntruderSeparation));
  check_wake(traj, s, fam(CheckFamily::Wake));
  check_terminal(traj, s, fam(CheckFamily::Terminal), fam(CheckFamily::CourseBounds));

  if (options.samples_per_step)
  {
    InterpolatedReport ir;
    ir.samples_per_step = *options.samples_per_step;
    const std::size_t A = traj.aircraft.size();
    for (std::size_t p = 0; p < A; ++p)
    {
      for (std::size_t q = p + 1; q < A; ++q)
      {
        auto sep = interpolated_min_separation(traj.aircraft[p], traj.aircraft[q], s.dt,
          s.safety.formation_sep, ir.samples_per_step);
        if (sep.violated())
          ir.violating_pairs.push_back({aircraft_id(p), aircraft_id(q), std::move(sep)});
      }
      for (std::size_t r = 0; r < traj.intruders.size(); ++r)
      {
        auto sep = interpolated_min_separation(traj.aircraft[p], traj.intruders[r], s.dt,
          s.safety.intruder_sep, ir.samples_per_step);
        if (sep.violated())
          ir.violating_pairs.push_back({aircraft_id(p), intruder_id(r), std::move(sep)});
      }
    }
    report.interpolated = std::move(ir);
  }
  return report;
}

namespace {

nlohmann::json location_json(const std::optional<ResidualLocation>& loc)
{
  using nlohmann::json;
  if (!loc)
    return nullptr;
  return {{"step", loc->step}, {"aircraft", aircraft_id(loc->aircraft)},
    {"axis", loc->axis ? json(*loc->axis + 1) : json(nullptr)},
    {"other", loc->other ? json(*loc->other) : json(nullptr)}};
}

} // namespace

std::string validation_report_json(const ValidationReport& report)
{
  using nlohmann::json;
  json families = json::object();
  for (std::size_t i = 0; i < kCheckFamilies; ++i)
  {
    const FamilyResult& f = report.families[i];
    json entry = {{"pass", f.pass()}, {"tolerance", f.tolerance}, {"checks", f.checks},
      {"violations", f.violations},
      {"worst_residual", f.worst_residual ? number_or_null(*f.worst_residual) : json(nullptr)}};
    entry["worst_location"] = location_json(f.worst_location);
    entry["first_violation"] = location_json(f.first_violation);
    families[std::string(family_key(static_cast<CheckFamily>(i)))] = std::move(entry);
  }
  json doc = {{"pass", report.pass()}, {"families", std::move(families)}};
  if (report.interpolated)
  {
    json pairs = json::array();
    for (const PairFinding& pf : report.interpolated->violating_pairs)
    {
      json sampled = json::array();
      for (const auto& v : pf.separation.sampled)
        sampled.push_back(violation_json(v));
      json exact = json::array();
      for (const auto& v : pf.separation.exact)
        exact.push_back(violation_json(v));
      const AxisTriple& m = pf.separation.min_gaps;
      pairs.push_back({{"first", pf.first}, {"second", pf.second},
        {"min_gaps_ft", {number_or_null(m[0]), number_or_null(m[1]), number_or_null(m[2])}},
        {"sampled", std::move(sampled)}, {"exact", std::move(exact)}});
    }
    doc["interpolated"] = {{"advisory", true},
      {"samples_per_step", report.interpolated->samples_per_step},
      {"violating_pairs", std::move(pairs)}};
  }
  else
  {
    doc["interpolated"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

} // namespace formation_avoid
