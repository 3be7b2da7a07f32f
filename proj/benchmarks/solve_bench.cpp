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


#include "bench_common.hpp"

#include <formation_avoid/model_builder.hpp>
#include <formation_avoid/oracle.hpp>
#include <formation_avoid/solver.hpp>

#include <benchmark/benchmark.h>

#include <algorithm>
#include <string>
#include <vector>

namespace formation_avoid {
namespace {

void solve_config(benchmark::State& state, const char* name, const char* backend)
{
  const MilpModel m = build_model(bench::load(name));
  SolveOptions o;
  o.backend = backend;
  o.relative_gap_target = 0.05;
  Solution sol;
  for (auto _ : state)
    sol = solve(m, o);
  state.counters["objective"] = sol.objective;
  state.counters["nodes"] = static_cast<double>(sol.stats.nodes.value_or(0));
  state.SetLabel(to_string(sol.status));
}

void BM_SolveTiny(benchmark::State& state)
{
  solve_config(state, "tiny_oracle.json", kBuiltinBackend);
}
BENCHMARK(BM_SolveTiny)->Unit(benchmark::kMillisecond);

void BM_SolveTwoAircraft(benchmark::State& state)
{
  solve_config(state, "two_aircraft_side_intruder.json", kBuiltinBackend);
}
BENCHMARK(BM_SolveTwoAircraft)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ProveInfeasible(benchmark::State& state)
{
  solve_config(state, "impossible_terminal.json", kBuiltinBackend);
}
BENCHMARK(BM_ProveInfeasible)->Unit(benchmark::kMillisecond);

void BM_SolveTwoAircraftHighs(benchmark::State& state)
{
  const std::vector<std::string> names = available_backends();
  if (std::find(names.begin(), names.end(), kHighsBackend) == names.end())
  {
    state.SkipWithError("HiGHS backend not built");
    return;
  }
  solve_config(state, "two_aircraft_side_intruder.json", kHighsBackend);
}
BENCHMARK(BM_SolveTwoAircraftHighs)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_OracleTiny(benchmark::State& state)
{
  const Scenario s = bench::load("tiny_oracle.json");
  const double u = s.envelope.u_hi[1];
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_plan(s, {-u, 0.0, u}, {1}));
}
BENCHMARK(BM_OracleTiny)->Unit(benchmark::kMillisecond);

} // namespace
} // namespace formation_avoid
