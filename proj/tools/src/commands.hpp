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

#ifndef FORMATION_AVOID_TOOLS_COMMANDS_HPP
#define FORMATION_AVOID_TOOLS_COMMANDS_HPP

#include <formation_avoid/solver.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace formation_avoid::cli {

enum ExitCode : int
{
  kExitOk = 0,
  kExitInputError = 2,
  kExitInfeasible = 3,
  kExitTimeoutNoSolution = 4,
  kExitBackendUnavailable = 5,
  kExitValidationFailed = 6,
};

struct SolveFlags
{
  std::string backend;
  double gap = 0.01;
  double time_limit_s = 900.0;
  std::uint64_t seed = 0;
  bool verbose = false;

  SolveOptions to_options() const;
};

struct Streams
{
  std::ostream& out;
  std::ostream& err;
};

int cmd_build(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
  Streams io);

int cmd_solve(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
  const SolveFlags& flags, Streams io);

/// Writes the report to `report_path`, or to io.out when empty.
int cmd_validate(const std::filesystem::path& scenario,
  const std::filesystem::path& trajectory_csv, const std::filesystem::path& report_path,
  std::optional<std::size_t> samples_per_step, Streams io);

/// `trajectory` is a CSV file or a directory holding trajectory.csv.
int cmd_report(const std::filesystem::path& trajectory, const std::filesystem::path& out_dir,
  Streams io);

int cmd_sweep(const std::filesystem::path& scenario, const std::filesystem::path& sweep_spec,
  const std::filesystem::path& out_dir, const SolveFlags& flags, std::size_t jobs,
  Streams io);

} // namespace formation_avoid::cli

#endif // FORMATION_AVOID_TOOLS_COMMANDS_HPP
