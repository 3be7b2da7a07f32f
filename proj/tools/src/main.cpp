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

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

using namespace formation_avoid::cli;

void add_solve_flags(CLI::App* cmd, SolveFlags& flags)
{
  cmd->add_option("--backend", flags.backend,
    "MILP backend (default: $FORMATION_MILP_BACKEND, then builtin)");
  cmd->add_option("--gap", flags.gap, "Relative optimality gap target in (0, 1]")
    ->capture_default_str();
  cmd->add_option("--time-limit", flags.time_limit_s, "Time limit in seconds")
    ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Random seed passed to the backend")
    ->capture_default_str();
  cmd->add_flag("--verbose", flags.verbose, "Print backend progress to stderr");
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Formation collision avoidance by mixed-integer linear programming"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::string trajectory;
  std::string sweep_spec;
  std::optional<std::size_t> samples_per_step;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  SolveFlags flags;

  auto* build = app.add_subcommand("build", "Build the model and export it as an LP file");
  build->add_option("--scenario", scenario, "Scenario JSON")->required();
  build->add_option("--out", out, "Output directory")->required();

  auto* solve = app.add_subcommand("solve", "Solve a scenario and write its trajectory");
  solve->add_option("--scenario", scenario, "Scenario JSON")->required();
  solve->add_option("--out", out, "Output directory")->required();
  add_solve_flags(solve, flags);

  auto* validate = app.add_subcommand("validate", "Check a trajectory against a scenario");
  validate->add_option("--scenario", scenario, "Scenario JSON")->required();
  validate->add_option("--trajectory", trajectory, "Trajectory CSV")->required();
  validate->add_option("--out", out, "Report JSON path (default: stdout)");
  validate->add_option("--samples-per-step", samples_per_step,
    "Also check separation between steps with this many samples per step (>= 2)");

  auto* report = app.add_subcommand("report", "Write plot-ready series files");
  report->add_option("--trajectory", trajectory, "Trajectory CSV or solve output directory")
    ->required();
  report->add_option("--out", out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Solve a grid of intruder variations");
  sweep->add_option("--scenario", scenario, "Base scenario JSON")->required();
  sweep->add_option("--sweep", sweep_spec, "Sweep spec JSON")->required();
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Concurrent cells")->capture_default_str()
    ->check(CLI::PositiveNumber);
  add_solve_flags(sweep, flags);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);
    return kExitInputError;
  }

  const Streams io{std::cout, std::cerr};
  if (*build)
    return cmd_build(scenario, out, io);
  if (*solve)
    return cmd_solve(scenario, out, flags, io);
  if (*validate)
    return cmd_validate(scenario, trajectory, out, samples_per_step, io);
  if (*report)
    return cmd_report(trajectory, out, io);
  return cmd_sweep(scenario, sweep_spec, out, flags, jobs, io);
}
