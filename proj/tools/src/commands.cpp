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

#include "commands.hpp"

#include "manifest.hpp"
#include "sweep.hpp"

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/lp_format.hpp>
#include <formation_avoid/model_builder.hpp>
#include <formation_avoid/number_format.hpp>
#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>
#include <formation_avoid/validator.hpp>

#include <nlohmann/json.hpp>

#include <ostream>
#include <sstream>

namespace formation_avoid::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct LoadedScenario
{
  std::string text;
  Scenario scenario;
};

LoadedScenario load_scenario(const fs::path& path)
{
  LoadedScenario out;
  out.text = read_file(path);
  out.scenario = parse_scenario(out.text);
  return out;
}

json solve_options_json(const SolveFlags& f, const std::string& backend)
{
  return {{"backend", backend}, {"gap", f.gap}, {"time_limit_s", f.time_limit_s},
    {"seed", f.seed}};
}

void print_hint(std::ostream& err)
{
  err << "hint: available backends:";
  for (const auto& b : available_backends())
    err << ' ' << b;
  err << "; select one with --backend or " << kBackendEnvVar << '\n';
}

json breakdown_json(const Solution& sol, const ExtractedPlan& plan)
{
  const ObjectiveBreakdown& b = plan.breakdown;
  json slots = json::array();
  for (std::size_t s : b.slot_of)
    slots.push_back(s + 1);
  json doc = {
    {"status", to_string(sol.status)},
    {"objective", sol.objective},
    {"relative_gap", sol.relative_gap},
    {"best_bound", sol.best_bound},
    {"backend", sol.stats.backend},
    {"nodes", sol.stats.nodes ? json(*sol.stats.nodes) : json(nullptr)},
    {"lp_iterations", sol.stats.lp_iterations ? json(*sol.stats.lp_iterations) : json(nullptr)},
    {"breakdown", {{"maneuver", b.maneuver}, {"avoidance", b.avoidance}, {"drag", b.drag},
      {"smoothness", b.smoothness}, {"total", b.total()}}},
    {"slot_assignment", slots},
    {"off_position_count", b.off_position_count},
    {"objective_mismatch", plan.objective_mismatch},
  };
  return doc;
}

// Runs `body`, mapping the library's exception types onto exit codes.
template <typename F>
int guarded(Streams io, F&& body)
{
  try
  {
    return body();
  }
  catch (const ScenarioError& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  catch (const TrajectoryFormatError& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  catch (const ValidationError& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  catch (const SweepSpecError& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  catch (const ModelError& e)
  {
    io.err << "error: model: " << e.what() << '\n';
  }
  catch (const BackendUnavailable& e)
  {
    io.err << "error: " << e.what() << '\n';
    print_hint(io.err);
    return kExitBackendUnavailable;
  }
  catch (const BackendError& e)
  {
    io.err << "error: " << e.what() << '\n';
    return kExitBackendUnavailable;
  }
  catch (const IoError& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  catch (const std::invalid_argument& e)
  {
    io.err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

std::string series_file(const Track& track, double dt, int a, int b, const char* ha,
  const char* hb)
{
  std::ostringstream os;
  os << "# time_s " << ha << ' ' << hb << '\n';
  for (std::size_t k = 0; k < track.size(); ++k)
  {
    const StateSample& st = track[k];
    const double va = a < 3 ? st.position[a] : st.velocity[a - 3];
    const double vb = b < 3 ? st.position[b] : st.velocity[b - 3];
    os << format_number(dt * static_cast<double>(k)) << ' ' << format_number(va) << ' '
       << format_number(vb) << '\n';
  }
  return os.str();
}

std::string velocity_file(const Track& track, double dt)
{
  std::ostringstream os;
  os << "# time_s v1_fps v2_fps v3_fps\n";
  for (std::size_t k = 0; k < track.size(); ++k)
  {
    const AxisTriple& v = track[k].velocity;
    os << format_number(dt * static_cast<double>(k)) << ' ' << format_number(v[0]) << ' '
       << format_number(v[1]) << ' ' << format_number(v[2]) << '\n';
  }
  return os.str();
}

} // namespace

SolveOptions SolveFlags::to_options() const
{
  SolveOptions o;
  o.backend = backend;
  o.relative_gap_target = gap;
  o.time_limit_s = time_limit_s;
  o.seed = seed;
  o.verbose = verbose;
  return o;
}

int cmd_build(const fs::path& scenario_path, const fs::path& out_dir, Streams io)
{
  return guarded(io, [&] {
    const LoadedScenario in = load_scenario(scenario_path);
    RunManifest manifest("build", scenario_path, in.text);
    const MilpModel model = build_model(in.scenario);
    OutputSet outputs;
    outputs.add("model.lp", export_lp(model));
    manifest.set_extra("model", {{"variables", model.size()},
      {"binaries", model.binary_count()}, {"constraints", model.constraints().size()}});
    manifest.finish(outputs);
    outputs.commit(out_dir);
    io.out << "wrote " << (out_dir / "model.lp").string() << " (" << model.size()
           << " variables, " << model.binary_count() << " binaries, "
           << model.constraints().size() << " constraints)\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_solve(const fs::path& scenario_path, const fs::path& out_dir, const SolveFlags& flags,
  Streams io)
{
  return guarded(io, [&] {
    const LoadedScenario in = load_scenario(scenario_path);
    RunManifest manifest("solve", scenario_path, in.text);
    const SolveOptions options = flags.to_options();
    options.check();
    const std::string backend = resolve_backend_name(options);
    make_backend(backend);
    const MilpModel model = build_model(in.scenario);
    const Solution sol = solve(model, options);

    io.out << "status: " << to_string(sol.status) << '\n';
    if (!sol.has_values())
    {
      io.out << "relative_gap: n/a\n";
      if (sol.status == SolveStatus::Infeasible)
        return static_cast<int>(kExitInfeasible);
      if (sol.status == SolveStatus::TimedOutNoSolution)
        return static_cast<int>(kExitTimeoutNoSolution);
      io.err << "error: backend " << backend << " reported " << to_string(sol.status) << '\n';
      return static_cast<int>(kExitBackendUnavailable);
    }
    const ExtractedPlan plan = extract_trajectories(model, sol, in.scenario);
    io.out << "objective: " << format_number(sol.objective) << '\n'
           << "relative_gap: " << format_number(sol.relative_gap) << '\n';

    OutputSet outputs;
    outputs.add("trajectory.csv", write_trajectory_csv(plan.trajectory));
    outputs.add("breakdown.json", breakdown_json(sol, plan).dump(2) + "\n");
    manifest.options() = solve_options_json(flags, backend);
    manifest.set_backend(backend);
    manifest.finish(outputs);
    outputs.commit(out_dir);
    io.out << "wrote " << (out_dir / "trajectory.csv").string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const fs::path& scenario_path, const fs::path& trajectory_csv,
  const fs::path& report_path, std::optional<std::size_t> samples_per_step, Streams io)
{
  return guarded(io, [&] {
    const LoadedScenario in = load_scenario(scenario_path);
    const TrajectorySet traj = read_trajectory_csv(read_file(trajectory_csv));
    if (samples_per_step && *samples_per_step < 2)
      throw std::invalid_argument("--samples-per-step must be at least 2");
    const ValidationReport report = validate(traj, in.scenario, {samples_per_step});
    const std::string doc = validation_report_json(report);
    if (report_path.empty())
    {
      io.out << doc;
    }
    else
    {
      OutputSet outputs;
      outputs.add(report_path.filename().string(), doc);
      outputs.commit(report_path.has_parent_path() ? report_path.parent_path() : fs::path("."));
    }
    for (std::size_t f = 0; f < kCheckFamilies; ++f)
    {
      const FamilyResult& r = report.families[f];
      if (!r.pass())
        io.err << "fail: " << family_key(static_cast<CheckFamily>(f)) << " ("
               << r.violations << " violations, worst residual "
               << format_number(*r.worst_residual) << " at step "
               << r.worst_location->step << ", aircraft "
               << aircraft_id(r.worst_location->aircraft) << ")\n";
    }
    if (report.interpolated && !report.interpolated->violating_pairs.empty())
      io.err << "advisory: " << report.interpolated->violating_pairs.size()
             << " pair(s) lose separation between steps\n";
    io.err << (report.pass() ? "validation passed\n" : "validation FAILED\n");
    return static_cast<int>(report.pass() ? kExitOk : kExitValidationFailed);
  });
}

int cmd_report(const fs::path& trajectory, const fs::path& out_dir, Streams io)
{
  return guarded(io, [&] {
    fs::path csv = trajectory;
    if (fs::is_directory(trajectory))
      csv = trajectory / "trajectory.csv";
    if (!fs::exists(csv))
    {
      io.err << "warning: no trajectory found at " << csv.string() << "; nothing written\n";
      return static_cast<int>(kExitOk);
    }
    const std::string text = read_file(csv);
    std::istringstream lines(text);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line))
      if (!line.empty() && line != "\r")
        ++rows;
    if (rows <= 1)
    {
      io.err << "warning: trajectory " << csv.string() << " has no rows; nothing written\n";
      return static_cast<int>(kExitOk);
    }
    const TrajectorySet traj = read_trajectory_csv(text);

    OutputSet outputs;
    auto emit = [&](const Track& t, const std::string& id) {
      outputs.add("top_down_" + id + ".dat", series_file(t, traj.dt, 0, 1, "x1_ft", "x2_ft"));
      outputs.add("side_view_" + id + ".dat", series_file(t, traj.dt, 0, 2, "x1_ft", "x3_ft"));
      outputs.add("velocity_" + id + ".dat", velocity_file(t, traj.dt));
    };
    for (std::size_t p = 0; p < traj.aircraft.size(); ++p)
      emit(traj.aircraft[p], aircraft_id(p));
    for (std::size_t r = 0; r < traj.intruders.size(); ++r)
      emit(traj.intruders[r], intruder_id(r));
    outputs.commit(out_dir);
    io.out << "wrote " << outputs.files().size() << " series files to " << out_dir.string()
           << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const fs::path& scenario_path, const fs::path& sweep_spec,
  const fs::path& out_dir, const SolveFlags& flags, std::size_t jobs, Streams io)
{
  return guarded(io, [&] {
    const LoadedScenario in = load_scenario(scenario_path);
    RunManifest manifest("sweep", scenario_path, in.text);
    const std::string spec_text = read_file(sweep_spec);
    const SweepSpec spec = parse_sweep_spec(spec_text, in.scenario);
    const SolveOptions options = flags.to_options();
    options.check();
    const std::string backend = resolve_backend_name(options);
    make_backend(backend);

    SolveOptions quiet = options;
    quiet.verbose = false;
    const std::vector<SweepCell> cells = enumerate_cells(spec);
    const std::vector<SweepResult> results = run_sweep(in.scenario, spec, cells, quiet, jobs);

    OutputSet outputs;
    outputs.add("sweep.csv", sweep_table_csv(cells, results));
    manifest.options() = solve_options_json(flags, backend);
    manifest.options()["jobs"] = jobs;
    manifest.set_backend(backend);
    manifest.set_extra("sweep_spec", {{"path", sweep_spec.generic_string()},
      {"sha256", sha256_hex(spec_text)}});
    manifest.finish(outputs);
    outputs.commit(out_dir);

    std::size_t feasible = 0;
    for (const auto& r : results)
      feasible += r.feasible() ? 1 : 0;
    io.out << cells.size() << " cells, " << feasible << " feasible; wrote "
           << (out_dir / "sweep.csv").string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

} // namespace formation_avoid::cli
