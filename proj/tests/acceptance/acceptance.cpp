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


// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// if any hard criterion fails.

#include "commands.hpp"
#include "disjunction.hpp"
#include "manifest.hpp"
#include "test_support.hpp"

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/model_builder.hpp>
#include <formation_avoid/objective.hpp>
#include <formation_avoid/oracle.hpp>
#include <formation_avoid/solver.hpp>
#include <formation_avoid/validator.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fa = formation_avoid;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kLateral = 1;
constexpr std::size_t kVertical = 2;

// Pinned tolerances and limits.
constexpr double kMaxGap = 0.05;
constexpr double kSolveBudgetS = 900.0;
constexpr double kAltitudeHoldFt = 1e-9;
constexpr double kStableFraction = 0.90;
constexpr double kOracleSlack = 1e-6;
constexpr double kOracleBudgetS = 60.0;
constexpr std::size_t kTruthTablePoints = 1000;
constexpr std::uint64_t kTruthTableSeed = 1;
constexpr std::size_t kSubStepSamples = 8;
constexpr double kExpectedOnsetS = 18.0;
constexpr double kInfeasibleBudgetS = 300.0;

// SHA-256 of canonical_serialization() for two bundled configs; a change on
// any platform means the serialization is not platform independent.
const std::map<std::string, std::string> kCanonicalHashes = {
  {"tiny_oracle.json", "de830e11985c06f5fb7d03175b1f668cda16410bc2450186d9a9cbb4563aeb04"},
  {"two_aircraft_side_intruder.json", "f61539e14d161e1257f8d2d10e5db113cf6c2283e43181ccb240062e09963176"},
};

struct Line
{
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Solved
{
  std::string name;
  fa::Scenario scenario;
  fa::Solution solution;
  fa::ExtractedPlan plan;
  double seconds = 0.0;
};

// Every solve in the run lands here, for the objective agreement check.
std::vector<Solved> g_solved;

const Solved* solve_instance(const std::string& name, const fa::Scenario& s, double gap)
{
  fa::SolveOptions o;
  o.backend = fa::kBuiltinBackend;
  o.relative_gap_target = gap;
  o.time_limit_s = kSolveBudgetS;
  const auto t0 = std::chrono::steady_clock::now();
  const fa::MilpModel m = fa::build_model(s);
  fa::Solution sol = fa::solve(m, o);
  const double secs = seconds_since(t0);
  std::cout << "  solve " << name << ": " << fa::to_string(sol.status) << " in "
            << fmt("%.2f", secs) << " s\n";
  if (!sol.has_values())
    return nullptr;
  fa::ExtractedPlan plan = fa::extract_trajectories(m, sol, s);
  g_solved.push_back({name, s, std::move(sol), std::move(plan), secs});
  return &g_solved.back();
}

Line criterion1(const Solved*& two)
{
  fa::Scenario s = fa::testing::load_scenario("two_aircraft_side_intruder.json");
  s.steps = 30;
  s.dt = 1.0;
  two = solve_instance("two_aircraft_side_intruder", s, kMaxGap);
  if (!two)
    return {false, "no solution"};
  const fa::ValidationReport r = fa::validate(two->plan.trajectory, s);
  const bool ok = two->solution.relative_gap <= kMaxGap && two->seconds <= kSolveBudgetS
    && r.pass();
  return {ok, std::string(fa::to_string(two->solution.status)) + ", gap "
    + fmt("%.4f", two->solution.relative_gap) + ", " + fmt("%.1f", two->seconds)
    + " s, validate " + (r.pass() ? "pass" : "FAIL")};
}

Line criterion2()
{
  const fa::Scenario s = fa::testing::load_scenario("two_aircraft_lateral_only.json");
  const Solved* lat = solve_instance("two_aircraft_lateral_only", s, kMaxGap);
  if (!lat)
    return {false, "infeasible without vertical motion"};
  double drift = 0.0;
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
    for (const fa::StateSample& st : lat->plan.trajectory.aircraft[p])
      drift = std::max(drift,
        std::abs(st.position[kVertical] - s.formation.initial_positions[p][kVertical]));
  const bool valid = fa::validate(lat->plan.trajectory, s).pass();
  return {valid && drift <= kAltitudeHoldFt,
    "max altitude change " + fmt("%.3g", drift) + " ft, validate " + (valid ? "pass" : "FAIL")};
}

Line criterion3(const Solved* two)
{
  if (!two)
    return {false, "no two-aircraft solution"};
  const fa::Scenario& s = two->scenario;
  std::vector<bool> threatened(s.aircraft_count(), false);
  for (const fa::PairConflict& c : fa::predict_conflict(s).conflicts)
    threatened[c.aircraft] = true;
  const auto designated = fa::designated_track(s);
  std::ostringstream detail;
  bool any = false;
  bool all_stable = true;
  for (std::size_t p = 0; p < s.aircraft_count(); ++p)
  {
    if (threatened[p])
      continue;
    any = true;
    std::size_t within = 0;
    for (std::size_t k = 0; k < s.steps; ++k)
      within += std::abs(two->plan.trajectory.aircraft[p][k].position[kLateral]
                  - designated[k][p][kLateral])
          < s.safety.formation_tol[kLateral]
        ? 1
        : 0;
    const double frac = static_cast<double>(within) / static_cast<double>(s.steps);
    all_stable = all_stable && frac >= kStableFraction;
    detail << "aircraft " << fa::aircraft_id(p) << " within lateral tolerance at "
           << fmt("%.1f", 100.0 * frac) << "% of steps; ";
  }
  if (!any)
    return {false, "every aircraft is threatened"};
  const bool safe = fa::validate(two->plan.trajectory, s).pass();
  detail << (all_stable ? "stable" : "informational: alternative optimum");
  return {safe, detail.str()};
}

Line criterion4()
{
  const fa::Scenario s = fa::testing::load_scenario("tiny_oracle.json");
  const auto t0 = std::chrono::steady_clock::now();
  const double u = s.envelope.u_hi[kLateral];
  const fa::OracleResult oracle = fa::brute_force_plan(s, {-u, 0.0, u}, {kLateral});
  const Solved* milp = solve_instance("tiny_oracle", s, 1e-6);
  const double secs = seconds_since(t0);
  if (!oracle.best_cost || !milp)
    return {false, "oracle or MILP found no plan"};
  const bool oracle_valid = fa::validate(oracle.trajectory, s).pass();
  const bool milp_valid = fa::validate(milp->plan.trajectory, s).pass();
  const bool ok = milp->solution.objective <= *oracle.best_cost + kOracleSlack && oracle_valid
    && milp_valid && secs < kOracleBudgetS;
  return {ok, "MILP " + fmt("%.6g", milp->solution.objective) + " vs oracle "
    + fmt("%.6g", *oracle.best_cost) + " (" + std::to_string(oracle.nodes_explored)
    + " nodes), both validate " + (oracle_valid && milp_valid ? "pass" : "FAIL") + ", "
    + fmt("%.2f", secs) + " s"};
}

Line criterion5()
{
  const fa::testing::TruthTableResult t =
    fa::testing::disjunction_truth_table(kTruthTablePoints, kTruthTableSeed);
  return {t.points == kTruthTablePoints && t.mismatches == 0,
    std::to_string(t.points) + " points, " + std::to_string(t.geometric_separated)
      + " separated, " + std::to_string(t.mismatches) + " mismatches"};
}

Line criterion6()
{
  for (const char* name : {"conflict_free.json", "three_aircraft_side_intruder.json",
         "head_on_illustrative.json"})
    solve_instance(fs::path(name).stem().string(), fa::testing::load_scenario(name), kMaxGap);
  double worst = 0.0;
  std::string worst_name;
  for (const Solved& s : g_solved)
  {
    // Independent recomputation, not the figure cached in the plan.
    const double total = fa::recompute_objective(s.plan.trajectory, s.scenario).total();
    const double rel =
      std::abs(total - s.solution.objective) / std::max(1.0, std::abs(s.solution.objective));
    if (rel >= worst)
    {
      worst = rel;
      worst_name = s.name;
    }
  }
  return {!g_solved.empty() && worst <= fa::kObjectiveAgreementTolerance,
    std::to_string(g_solved.size()) + " solved instances, worst relative difference "
      + fmt("%.3g", worst) + " (" + worst_name + ")"};
}

Line criterion7()
{
  // Aircraft 2 cuts across aircraft 1's track between steps 4 and 5.
  fa::Scenario s = fa::testing::two_aircraft(10, 2);
  fa::TrajectorySet t;
  t.dt = s.dt;
  t.aircraft.assign(2, fa::Track(s.steps));
  for (std::size_t k = 0; k < s.steps; ++k)
  {
    const double x = 750.0 * static_cast<double>(k);
    t.aircraft[0][k].position = {x, 0.0, 0.0};
    t.aircraft[1][k].position = {x - 100.0, k <= 4 ? 350.0 : -350.0, 0.0};
  }
  const bool discrete_ok =
    fa::validate(t, s).family(fa::CheckFamily::FormationSeparation).pass();
  const fa::InterpolatedSeparation sep = fa::interpolated_min_separation(
    t.aircraft[0], t.aircraft[1], s.dt, s.safety.formation_sep, kSubStepSamples);
  const bool flagged = !sep.sampled.empty();
  std::string when = "none";
  if (flagged)
    when = fmt("%.4f", sep.sampled.front().time_s) + " s";
  return {discrete_ok && flagged, std::string("discrete check ")
    + (discrete_ok ? "clean" : "FLAGGED") + ", interpolated first hit at " + when};
}

Line criterion8()
{
  const fa::Scenario s = fa::testing::load_scenario("side_intruder_literal_15000.json");
  const fa::ConflictReport c = fa::predict_conflict(s);
  const auto predicted = c.first_violation_time();
  double onset = std::numeric_limits<double>::infinity();
  for (const fa::PairConflict& pc : c.conflicts)
    if (pc.continuous_onset)
      onset = std::min(onset, *pc.continuous_onset);
  const fa::ValidationReport r = fa::validate(fa::nominal_trajectory(s), s, {kSubStepSamples});
  double exact = std::numeric_limits<double>::infinity();
  for (const fa::PairFinding& pf : r.interpolated->violating_pairs)
    for (const fa::SubStepViolation& v : pf.separation.exact)
      exact = std::min(exact, v.onset_s);
  const auto& first = r.family(fa::CheckFamily::IntruderSeparation).first_violation;
  if (!predicted || !first)
    return {false, "no violation located"};
  const double validated = s.time_at(first->step);
  const bool ok = std::abs(*predicted - kExpectedOnsetS) <= s.dt
    && std::abs(validated - kExpectedOnsetS) <= s.dt;
  return {ok, "predict_conflict step time " + fmt("%.1f", *predicted) + " s (continuous onset "
    + fmt("%.4f", onset) + " s), validate first violation " + fmt("%.1f", validated)
    + " s at aircraft " + fa::aircraft_id(first->aircraft) + " (sub-step onset "
    + fmt("%.4f", exact) + " s)"};
}

Line criterion9()
{
  std::size_t configs = 0;
  std::vector<std::string> bad;
  for (const auto& entry : fs::directory_iterator(FA_SCENARIO_DIR))
  {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".json" || name.rfind("sweep_", 0) == 0)
      continue;
    ++configs;
    fa::testing::TempDir a("accept_a");
    fa::testing::TempDir b("accept_b");
    std::ostringstream out, err;
    const fa::cli::Streams io{out, err};
    const int ra = fa::cli::cmd_build(entry.path(), a.path(), io);
    const int rb = fa::cli::cmd_build(entry.path(), b.path(), io);
    if (ra != 0 || rb != 0
      || fa::testing::read_text(a / "model.lp") != fa::testing::read_text(b / "model.lp"))
      bad.push_back(name);
  }
  for (const auto& [name, expected] : kCanonicalHashes)
  {
    const std::string got = fa::cli::sha256_hex(
      fa::build_model(fa::testing::load_scenario(name)).canonical_serialization());
    if (got != expected)
    {
      std::cout << "  canonical hash " << name << " = " << got << '\n';
      bad.push_back(name + " (canonical hash)");
    }
  }
  std::string detail = std::to_string(configs) + " configs built twice, "
    + std::to_string(kCanonicalHashes.size()) + " pinned canonical hashes";
  for (const std::string& b : bad)
    detail += "; mismatch " + b;
  return {configs > 0 && bad.empty(), detail};
}

Line criterion10()
{
  const fs::path scenario = fa::testing::scenario_path("impossible_terminal.json");
  const fa::Scenario s = fa::testing::load_scenario("impossible_terminal.json");
  fa::testing::TempDir dir("accept_infeasible");
  std::ostringstream out, err;
  fa::cli::SolveFlags flags;
  flags.backend = fa::kBuiltinBackend;
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = fa::cli::cmd_solve(scenario, dir.path(), flags, {out, err});
  const double secs = seconds_since(t0);
  return {s.steps == 20 && rc == fa::cli::kExitInfeasible && secs < kInfeasibleBudgetS,
    "T = " + std::to_string(s.steps) + ", exit " + std::to_string(rc) + " in "
      + fmt("%.2f", secs) + " s"};
}

} // namespace

int main()
{
  const Solved* two = nullptr;
  const std::vector<std::pair<int, std::function<Line()>>> criteria = {
    {1, [&] { return criterion1(two); }},
    {2, criterion2},
    {3, [&] { return criterion3(two); }},
    {4, criterion4},
    {5, criterion5},
    {6, criterion6},
    {7, criterion7},
    {8, criterion8},
    {9, criterion9},
    {10, criterion10},
  };
  // Criterion 3 reads criterion 1's solution; keep g_solved from moving it.
  g_solved.reserve(16);

  int failed = 0;
  for (const auto& [id, run] : criteria)
  {
    Line line;
    try
    {
      line = run();
    }
    catch (const std::exception& e)
    {
      line = {false, std::string("exception: ") + e.what()};
    }
    failed += line.pass ? 0 : 1;
    std::cout << "criterion " << id << ": " << (line.pass ? "PASS" : "FAIL") << "  "
              << line.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
