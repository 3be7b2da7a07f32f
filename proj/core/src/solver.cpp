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

#include "backends.hpp"
#include "branch_and_bound.hpp"

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/solver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace formation_avoid {

namespace detail {

LpImage to_lp(const MilpModel& model)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  const int n = static_cast<int>(vars.size());
  const int m = static_cast<int>(rows.size());

  LpImage img;
  lp::Problem& p = img.problem;
  p.a.rows = m;
  p.a.cols = n;
  p.cost.resize(n);
  p.col_lo.resize(n);
  p.col_hi.resize(n);
  img.integer.resize(n);
  for (int j = 0; j < n; ++j)
  {
    p.cost[j] = model.objective_coefficient(VarId{j});
    p.col_lo[j] = vars[j].lb;
    p.col_hi[j] = vars[j].ub;
    img.integer[j] = vars[j].type == VarType::Binary;
  }
  p.cost_offset = model.objective_constant();

  std::vector<int> count(n + 1, 0);
  for (const auto& row : rows)
    for (const auto& [coef, id] : row.lhs.terms)
      ++count[id.value + 1];
  for (int j = 0; j < n; ++j)
    count[j + 1] += count[j];
  p.a.start = count;
  p.a.index.resize(count[n]);
  p.a.value.resize(count[n]);
  std::vector<int> fill(count.begin(), count.end() - 1);
  p.row_lo.resize(m);
  p.row_hi.resize(m);
  for (int i = 0; i < m; ++i)
  {
    const auto& row = rows[i];
    for (const auto& [coef, id] : row.lhs.terms)
    {
      const int k = fill[id.value]++;
      p.a.index[k] = i;
      p.a.value[k] = coef;
    }
    p.row_lo[i] = row.sense == Sense::LessEqual ? -inf : row.rhs;
    p.row_hi[i] = row.sense == Sense::GreaterEqual ? inf : row.rhs;
  }
  return img;
}

namespace {

class BuiltinBackend final : public MilpBackend
{
public:
  std::string name() const override { return kBuiltinBackend; }

  Solution solve(const MilpModel& model, const SolveOptions& options) const override
  {
    const LpImage img = to_lp(model);
    mip::Options mo;
    mo.relative_gap = options.relative_gap_target;
    mo.time_limit_s = options.time_limit_s;
    mo.seed = options.seed;
    mo.verbose = options.verbose;
    const mip::Result r = mip::branch_and_bound(img.problem, img.integer, mo);

    Solution sol;
    sol.stats.backend = name();
    sol.stats.nodes = r.nodes;
    sol.stats.lp_iterations = r.lp_iterations;
    switch (r.status)
    {
      case mip::Status::Optimal:
        sol.status = SolveStatus::Optimal;
        break;
      case mip::Status::FeasibleWithGap:
        sol.status = SolveStatus::FeasibleWithGap;
        break;
      case mip::Status::Infeasible:
        sol.status = SolveStatus::Infeasible;
        return sol;
      case mip::Status::Unbounded:
        sol.status = SolveStatus::Unbounded;
        return sol;
      case mip::Status::NoSolution:
        sol.status = SolveStatus::TimedOutNoSolution;
        sol.best_bound = r.bound;
        return sol;
      case mip::Status::NumericalFailure:
        throw BackendError(name(), "numerical failure: " + r.message);
    }
    sol.objective = r.objective;
    sol.best_bound = r.bound;
    sol.relative_gap = relative_gap(r.objective, r.bound);
    sol.values = r.values;
    return sol;
  }
};

} // namespace

std::unique_ptr<MilpBackend> make_builtin_backend()
{
  return std::make_unique<BuiltinBackend>();
}

} // namespace detail

namespace {

using detail::LpImage;

bool rows_hold_after_flip(const LpImage& img, const std::vector<double>& activity,
  int j, double delta)
{
  const auto& a = img.problem.a;
  for (int k = a.start[j]; k < a.start[j + 1]; ++k)
  {
    const int i = a.index[k];
    const double act = activity[i] + a.value[k] * delta;
    const double tol = 1e-7 * (1.0 + std::abs(act));
    if (act < img.problem.row_lo[i] - tol || act > img.problem.row_hi[i] + tol)
      return false;
  }
  return true;
}

// Re-solves the continuous part with every binary fixed. Returns the new
// values if the LP solves and does not worsen the objective.
bool resolve_continuous(const MilpModel& model, const LpImage& img,
  std::vector<double>& values)
{
  lp::Problem p = img.problem;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (img.integer[j])
      p.col_lo[j] = p.col_hi[j] = values[j];
  lp::DualSimplex simplex(p);
  lp::Options o;
  o.deadline = lp::Clock::now() + std::chrono::seconds(120);
  if (simplex.solve(o) != lp::Status::Optimal)
    return false;
  std::vector<double> next = simplex.col_values();
  for (std::size_t j = 0; j < values.size(); ++j)
    if (img.integer[j])
      next[j] = values[j];
  const double before = model.evaluate_objective(values);
  const double after = model.evaluate_objective(next);
  if (after > before + 1e-9 * (1.0 + std::abs(before)))
    return false;
  values = std::move(next);
  return true;
}

void polish(const MilpModel& model, Solution& sol)
{
  const LpImage img = detail::to_lp(model);
  const int n = img.problem.a.cols;
  if (static_cast<int>(sol.values.size()) != n)
    throw BackendError(sol.stats.backend, "solution has "
      + std::to_string(sol.values.size()) + " values for " + std::to_string(n)
      + " variables");

  for (int j = 0; j < n; ++j)
  {
    if (!img.integer[j])
      continue;
    const double r = std::round(sol.values[j]);
    if (std::abs(sol.values[j] - r) > 1e-6)
      throw BackendError(sol.stats.backend, "binary " + canonical_name(model.variables()[j].key)
        + " = " + std::to_string(sol.values[j]) + " is not integral");
    sol.values[j] = r;
  }

  const double start = model.evaluate_objective(sol.values);
  resolve_continuous(model, img, sol.values);

  for (int pass = 0; pass < 3; ++pass)
  {
    std::vector<double> activity(img.problem.a.rows, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = img.problem.a.start[j]; k < img.problem.a.start[j + 1]; ++k)
        activity[img.problem.a.index[k]] += img.problem.a.value[k] * sol.values[j];
    bool flipped = false;
    for (int j = 0; j < n; ++j)
    {
      const double c = img.problem.cost[j];
      if (!img.integer[j] || c == 0.0)
        continue;
      const double delta = 1.0 - 2.0 * sol.values[j];
      if (c * delta >= 0 || !rows_hold_after_flip(img, activity, j, delta))
        continue;
      sol.values[j] += delta;
      for (int k = img.problem.a.start[j]; k < img.problem.a.start[j + 1]; ++k)
        activity[img.problem.a.index[k]] += img.problem.a.value[k] * delta;
      flipped = true;
    }
    if (!flipped)
      break;
    resolve_continuous(model, img, sol.values);
  }

  sol.objective = model.evaluate_objective(sol.values);
  sol.stats.polish_gain = std::max(0.0, start - sol.objective);
  if (sol.best_bound > sol.objective)
    sol.best_bound = sol.objective;
  sol.relative_gap = relative_gap(sol.objective, sol.best_bound);
}

} // namespace

const char* to_string(SolveStatus status)
{
  switch (status)
  {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::FeasibleWithGap:
      return "FeasibleWithGap";
    case SolveStatus::Infeasible:
      return "Infeasible";
    case SolveStatus::Unbounded:
      return "Unbounded";
    case SolveStatus::TimedOutNoSolution:
      break;
  }
  return "TimedOutNoSolution";
}

void SolveOptions::check() const
{
  if (!(relative_gap_target > 0.0 && relative_gap_target <= 1.0))
    throw std::invalid_argument("relative gap target must be in (0, 1]");
  if (!(time_limit_s > 0.0))
    throw std::invalid_argument("time limit must be positive");
}

double Solution::value(const MilpModel& model, const VarKey& key) const
{
  const auto id = model.find(key);
  if (!id)
    throw ExtractionError("variable " + canonical_name(key) + " is not in the model");
  if (static_cast<std::size_t>(id->value) >= values.size())
    throw ExtractionError("no value for variable " + canonical_name(key));
  return values[id->value];
}

double relative_gap(double incumbent, double bound)
{
  const double diff = incumbent - bound;
  if (!(diff > 1e-9))
    return 0.0;
  return diff / std::max(std::abs(incumbent), 1e-9);
}

BackendError::BackendError(std::string backend, const std::string& detail)
  : std::runtime_error("backend '" + backend + "': " + detail),
    backend_(std::move(backend))
{
}

std::vector<std::string> available_backends()
{
  std::vector<std::string> names{kBuiltinBackend};
#ifdef FORMATION_AVOID_HAVE_HIGHS
  names.emplace_back(kHighsBackend);
#endif
  return names;
}

std::unique_ptr<MilpBackend> make_backend(std::string_view name)
{
  if (name == kBuiltinBackend)
    return detail::make_builtin_backend();
#ifdef FORMATION_AVOID_HAVE_HIGHS
  if (name == kHighsBackend)
    return detail::make_highs_backend();
#endif
  std::string known;
  for (const auto& b : available_backends())
    known += (known.empty() ? "" : ", ") + b;
  throw BackendUnavailable(std::string(name),
    "not available in this build (available: " + known + ")");
}

std::string resolve_backend_name(const SolveOptions& options)
{
  if (!options.backend.empty())
    return options.backend;
  if (const char* env = std::getenv(kBackendEnvVar); env != nullptr && *env != '\0')
    return env;
  return kBuiltinBackend;
}

Solution solve(const MilpModel& model, const SolveOptions& options)
{
  options.check();
  const auto backend = make_backend(resolve_backend_name(options));
  const auto start = std::chrono::steady_clock::now();
  Solution sol = backend->solve(model, options);
  sol.stats.backend = backend->name();
  if (sol.has_values())
    polish(model, sol);
  sol.stats.wall_time_s =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

ExtractedPlan extract_trajectories(
  const MilpModel& model, const Solution& solution, const Scenario& s)
{
  if (!solution.has_values())
    throw ExtractionError(std::string("solution status ") + to_string(solution.status)
      + " carries no values");
  if (solution.values.size() != model.size())
    throw ExtractionError("solution has " + std::to_string(solution.values.size())
      + " values, model has " + std::to_string(model.size()) + " variables");

  ExtractedPlan plan;
  TrajectorySet& traj = plan.trajectory;
  traj.dt = s.dt;
  traj.aircraft.assign(s.aircraft_count(), Track(s.steps));
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
    for (std::size_t k = 0; k < s.steps; ++k)
    {
      StateSample& st = traj.aircraft[p][k];
      for (std::size_t d = 0; d < kAxes; ++d)
      {
        st.position[d] = solution.value(model, VarKey::pos(k, p, d));
        st.velocity[d] = solution.value(model, VarKey::vel(k, p, d));
        st.acceleration[d] = solution.value(model, VarKey::acc(k, p, d));
      }
    }
  const TrajectorySet nominal = nominal_trajectory(s);
  traj.intruders = nominal.intruders;

  plan.breakdown = recompute_objective(traj, s);
  plan.objective_mismatch = std::abs(plan.breakdown.total() - solution.objective)
    / std::max(1.0, std::abs(solution.objective));
  return plan;
}

} // namespace formation_avoid
