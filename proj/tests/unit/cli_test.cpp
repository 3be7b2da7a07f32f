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
#include "test_support.hpp"

#include <formation_avoid/kinematics.hpp>
#include <formation_avoid/trajectory.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace formation_avoid::cli {
namespace {

namespace fs = std::filesystem;
using formation_avoid::testing::read_text;
using formation_avoid::testing::scenario_path;
using formation_avoid::testing::TempDir;
using json = nlohmann::json;

struct Capture
{
  std::ostringstream out;
  std::ostringstream err;
  Streams io() { return {out, err}; }
};

SolveFlags builtin_flags()
{
  SolveFlags f;
  f.backend = "builtin";
  return f;
}

void write_text(const fs::path& path, const std::string& text)
{
  std::ofstream(path, std::ios::binary) << text;
}

TEST(Sha256, KnownVector)
{
  EXPECT_EQ(sha256_hex("abc"),
    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CliBuild, WritesModelAndManifestWithMatchingHashes)
{
  TempDir dir("cli_build");
  Capture c;
  const fs::path scenario = scenario_path("two_aircraft_side_intruder.json");
  ASSERT_EQ(cmd_build(scenario, dir.path(), c.io()), kExitOk) << c.err.str();

  const std::string lp = read_text(dir / "model.lp");
  const json manifest = json::parse(read_text(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "build");
  EXPECT_EQ(manifest.at("scenario").at("sha256"), sha256_hex(read_text(scenario)));
  ASSERT_EQ(manifest.at("outputs").size(), 1u);
  const json& out = manifest.at("outputs")[0];
  EXPECT_EQ(out.at("path"), "model.lp");
  EXPECT_EQ(out.at("sha256"), sha256_hex(lp));
  EXPECT_EQ(out.at("bytes"), lp.size());
  EXPECT_GE(manifest.at("timestamps").at("wall_time_s").get<double>(), 0.0);
}

TEST(CliBuild, Deterministic)
{
  TempDir a("cli_det_a");
  TempDir b("cli_det_b");
  Capture c;
  const fs::path scenario = scenario_path("three_aircraft_side_intruder.json");
  ASSERT_EQ(cmd_build(scenario, a.path(), c.io()), kExitOk);
  ASSERT_EQ(cmd_build(scenario, b.path(), c.io()), kExitOk);
  EXPECT_EQ(read_text(a / "model.lp"), read_text(b / "model.lp"));
  json ma = json::parse(read_text(a / "manifest.json"));
  json mb = json::parse(read_text(b / "manifest.json"));
  ma.erase("timestamps");
  mb.erase("timestamps");
  EXPECT_EQ(ma, mb);
}

TEST(CliBuild, MalformedScenarioIsInputError)
{
  TempDir dir("cli_bad");
  write_text(dir / "bad.json", R"({"dt": 1.0, "steps": )");
  Capture c;
  EXPECT_EQ(cmd_build(dir / "bad.json", dir / "out", c.io()), kExitInputError);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_FALSE(c.err.str().empty());

  write_text(dir / "neg.json", R"({"dt": -1.0, "steps": 4, "formation": {
    "initial_positions": [[0,0,0]], "initial_velocities": [[750,0,0]]}})");
  EXPECT_EQ(cmd_build(dir / "neg.json", dir / "out", c.io()), kExitInputError);
  EXPECT_EQ(cmd_build(dir / "missing.json", dir / "out", c.io()), kExitInputError);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(CliSolve, ConflictFreeNeedsNoManeuver)
{
  TempDir dir("cli_solve");
  Capture c;
  ASSERT_EQ(cmd_solve(scenario_path("conflict_free.json"), dir.path(), builtin_flags(), c.io()),
    kExitOk) << c.err.str();
  const json breakdown = json::parse(read_text(dir / "breakdown.json"));
  EXPECT_NEAR(breakdown.at("breakdown").at("maneuver").get<double>(), 0.0, 1e-9);
  const json manifest = json::parse(read_text(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("backend"), "builtin");
  for (const json& out : manifest.at("outputs"))
    EXPECT_EQ(out.at("sha256"), sha256_hex(read_text(dir / out.at("path").get<std::string>())));

  Capture v;
  EXPECT_EQ(cmd_validate(scenario_path("conflict_free.json"), dir / "trajectory.csv",
              dir / "report.json", std::nullopt, v.io()),
    kExitOk) << v.out.str();
}

TEST(CliSolve, ExitCodes)
{
  TempDir dir("cli_codes");
  Capture c;
  EXPECT_EQ(cmd_solve(scenario_path("impossible_terminal.json"), dir / "imp", builtin_flags(),
              c.io()),
    kExitInfeasible);

  SolveFlags rushed = builtin_flags();
  rushed.time_limit_s = 1e-4;
  EXPECT_EQ(cmd_solve(scenario_path("two_aircraft_side_intruder.json"), dir / "rushed", rushed,
              c.io()),
    kExitTimeoutNoSolution);

  SolveFlags unknown;
  unknown.backend = "no-such-backend";
  EXPECT_EQ(cmd_solve(scenario_path("conflict_free.json"), dir / "unknown", unknown, c.io()),
    kExitBackendUnavailable);

  SolveFlags bad_gap = builtin_flags();
  bad_gap.gap = 0.0;
  EXPECT_EQ(cmd_solve(scenario_path("conflict_free.json"), dir / "gap", bad_gap, c.io()),
    kExitInputError);
}

TEST(CliValidate, NominalLiteralGeometryFails)
{
  TempDir dir("cli_validate");
  const fs::path scenario = scenario_path("side_intruder_literal_15000.json");
  const Scenario s = parse_scenario(read_text(scenario));
  write_text(dir / "nominal.csv", write_trajectory_csv(nominal_trajectory(s)));
  Capture c;
  EXPECT_EQ(cmd_validate(scenario, dir / "nominal.csv", {}, std::nullopt, c.io()),
    kExitValidationFailed);
  const json report = json::parse(c.out.str());
  EXPECT_FALSE(report.at("pass").get<bool>());

  const std::string csv = read_text(dir / "nominal.csv");
  write_text(dir / "truncated.csv", csv.substr(0, csv.size() / 2));
  Capture t;
  EXPECT_EQ(cmd_validate(scenario, dir / "truncated.csv", {}, std::nullopt, t.io()),
    kExitInputError);
  EXPECT_EQ(cmd_validate(scenario, dir / "nominal.csv", {}, std::size_t{1}, t.io()),
    kExitInputError);
}

TEST(CliReport, WritesSeriesPerTrackAndView)
{
  TempDir dir("cli_report");
  const Scenario s = formation_avoid::testing::load_scenario("two_aircraft_side_intruder.json");
  write_text(dir / "trajectory.csv", write_trajectory_csv(nominal_trajectory(s)));
  Capture c;
  ASSERT_EQ(cmd_report(dir.path(), dir / "plots", c.io()), kExitOk) << c.err.str();

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "plots"))
    files += entry.path().extension() == ".dat" ? 1 : 0;
  EXPECT_EQ(files, 9u);

  std::istringstream side(read_text(dir / "plots" / "side_view_I1.dat"));
  std::string line;
  std::getline(side, line);
  EXPECT_EQ(line.rfind("#", 0), 0u);
  std::size_t rows = 0;
  while (std::getline(side, line))
  {
    if (line.empty())
      continue;
    double t = 0.0, x1 = 0.0, x3 = 1.0;
    std::istringstream(line) >> t >> x1 >> x3;
    EXPECT_EQ(x3, s.intruders[0].initial_position[2]);
    ++rows;
  }
  EXPECT_EQ(rows, s.steps);
}

TEST(CliReport, EmptyInputWritesNothing)
{
  TempDir dir("cli_report_empty");
  Capture c;
  EXPECT_EQ(cmd_report(dir.path(), dir / "plots", c.io()), kExitOk);
  EXPECT_FALSE(c.err.str().empty());
  EXPECT_TRUE(!fs::exists(dir / "plots") || fs::is_empty(dir / "plots"));
}

TEST(CliPipeline, RerunsProduceIdenticalArtifacts)
{
  TempDir a("cli_rerun_a");
  TempDir b("cli_rerun_b");
  const fs::path scenario = scenario_path("tiny_oracle.json");
  for (const TempDir* dir : {&a, &b})
  {
    Capture c;
    ASSERT_EQ(cmd_build(scenario, dir->path() / "build", c.io()), kExitOk);
    ASSERT_EQ(cmd_solve(scenario, dir->path() / "solve", builtin_flags(), c.io()), kExitOk);
    ASSERT_EQ(cmd_validate(scenario, dir->path() / "solve" / "trajectory.csv",
                dir->path() / "report.json", std::size_t{8}, c.io()),
      kExitOk);
    ASSERT_EQ(cmd_report(dir->path() / "solve", dir->path() / "plots", c.io()), kExitOk);
  }
  for (const char* leaf : {"build/model.lp", "solve/trajectory.csv", "solve/breakdown.json",
         "report.json", "plots/side_view_1.dat", "plots/top_down_I1.dat",
         "plots/velocity_1.dat"})
    EXPECT_EQ(read_text(a / leaf), read_text(b / leaf)) << leaf;
  for (const char* leaf : {"build/manifest.json", "solve/manifest.json"})
  {
    json ma = json::parse(read_text(a / leaf));
    json mb = json::parse(read_text(b / leaf));
    ma.erase("timestamps");
    mb.erase("timestamps");
    EXPECT_EQ(ma, mb) << leaf;
  }
}

std::vector<json> sweep_rows(const fs::path& csv)
{
  std::istringstream in(read_text(csv));
  std::string line;
  std::getline(in, line);
  std::vector<json> rows;
  while (std::getline(in, line))
  {
    std::vector<std::string> cols;
    std::string col;
    std::istringstream fields(line);
    while (std::getline(fields, col, ','))
      cols.push_back(col);
    rows.push_back({{"along", std::stod(cols.at(1))}, {"lateral", std::stod(cols.at(2))},
      {"status", cols.at(5)}});
  }
  return rows;
}

TEST(CliSweep, GridWithSeededImpossibleCell)
{
  TempDir dir("cli_sweep");
  write_text(dir / "grid.json",
    R"({"intruder": 1, "along_ft": [0, 9000, 12000], "lateral_ft": [0, 1450, 2500]})");
  Capture c;
  ASSERT_EQ(cmd_sweep(scenario_path("tiny_oracle.json"), dir / "grid.json", dir / "out",
              builtin_flags(), 1, c.io()),
    kExitOk) << c.err.str();
  const std::vector<json> rows = sweep_rows(dir / "out" / "sweep.csv");
  ASSERT_EQ(rows.size(), 9u);
  // Intruder sitting on the lead at step 0: nothing can fix that.
  EXPECT_EQ(rows[0].at("along"), 0.0);
  EXPECT_EQ(rows[0].at("lateral"), 0.0);
  EXPECT_EQ(rows[0].at("status"), "Infeasible");
  const auto tiny = std::find_if(rows.begin(), rows.end(), [](const json& r) {
    return r.at("along") == 9000.0 && r.at("lateral") == 1450.0;
  });
  ASSERT_NE(tiny, rows.end());
  EXPECT_EQ(tiny->at("status"), "Optimal");
}

TEST(CliSweep, EmptyGridIsHeaderOnly)
{
  TempDir dir("cli_sweep_empty");
  write_text(dir / "grid.json", R"({"lateral_ft": []})");
  Capture c;
  ASSERT_EQ(cmd_sweep(scenario_path("tiny_oracle.json"), dir / "grid.json", dir / "out",
              builtin_flags(), 2, c.io()),
    kExitOk);
  const std::string csv = read_text(dir / "out" / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST(CliSweep, BadSpecIsInputError)
{
  TempDir dir("cli_sweep_bad");
  write_text(dir / "grid.json", R"({"intruder": 4})");
  Capture c;
  EXPECT_EQ(cmd_sweep(scenario_path("tiny_oracle.json"), dir / "grid.json", dir / "out",
              builtin_flags(), 1, c.io()),
    kExitInputError);
  write_text(dir / "grid.json", R"({"bogus": [1]})");
  EXPECT_EQ(cmd_sweep(scenario_path("tiny_oracle.json"), dir / "grid.json", dir / "out",
              builtin_flags(), 1, c.io()),
    kExitInputError);
}

} // namespace
} // namespace formation_avoid::cli
