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

#ifndef FORMATION_AVOID_SOLVER_HPP
#define FORMATION_AVOID_SOLVER_HPP

#include <formation_avoid/milp_model.hpp>
#include <formation_avoid/objective.hpp>
#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formation_avoid {

enum class SolveStatus
{
  Optimal,
  FeasibleWithGap,
  Infeasible,
  Unbounded,
  TimedOutNoSolution,
};

const char* to_string(SolveStatus status);

struct SolveOptions
{
  /// Stop once (incumbent - bound) / |incumbent| reaches this value.
  double relative_gap_target = 0.01;
  double time_limit_s = 900.0;
  std::uint64_t seed = 0;
  /// Empty: FORMATION_MILP_BACKEND, then the default backend.
  std::string backend;
  bool verbose = false;

  /// Throws std::invalid_argument unless the gap is in (0, 1] and the time
  /// limit is positive.
  void check() const;
};

struct SolveStats
{
  std::string backend;
  double wall_time_s = 0.0;
  std::optional<std::int64_t> nodes;
  std::optional<std::int64_t> lp_iterations;
  /// Objective improvement from the post-solve polish, if any.
  double polish_gain = 0.0;
};

struct Solution
{
  SolveStatus status = SolveStatus::TimedOutNoSolution;
  double objective = 0.0;
  double relative_gap = 0.0;
  double best_bound = 0.0;
  /// Indexed by VarId; present iff has_values().
  std::vector<double> values;
  SolveStats stats;

  bool has_values() const
  {
    return status == SolveStatus::Optimal || status == SolveStatus::FeasibleWithGap;
  }
  double value(const MilpModel& model, const VarKey& key) const;
};

/// (incumbent - bound) / |incumbent|, clamped at zero; zero when the two
/// agree to 1e-9 absolute.
double relative_gap(double incumbent, double bound);

class BackendError : public std::runtime_error
{
public:
  BackendError(std::string backend, const std::string& detail);
  const std::string& backend() const { return backend_; }

private:
  std::string backend_;
};

class BackendUnavailable : public BackendError
{
public:
  using BackendError::BackendError;
};

/// Minimal MILP engine contract: continuous and binary columns, linear rows,
/// minimization, gap and time controls, incumbent retrieval.
class MilpBackend
{
public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  virtual Solution solve(const MilpModel& model, const SolveOptions& options) const = 0;
};

inline constexpr const char* kBackendEnvVar = "FORMATION_MILP_BACKEND";
inline constexpr const char* kBuiltinBackend = "builtin";
inline constexpr const char* kHighsBackend = "highs";

/// Names of the backends compiled into this build.
std::vector<std::string> available_backends();

/// Throws BackendUnavailable for unknown or not-compiled backends.
std::unique_ptr<MilpBackend> make_backend(std::string_view name);

/// options.backend, else $FORMATION_MILP_BACKEND, else "builtin".
std::string resolve_backend_name(const SolveOptions& options);

/// Runs the selected backend, then normalizes the result: binaries within
/// 1e-6 of {0,1} are snapped (larger violations throw BackendError), the
/// continuous part is re-solved with binaries fixed so every slack is
/// tight, and single binary flips that keep all rows satisfied and lower
/// the objective are applied.
Solution solve(const MilpModel& model, const SolveOptions& options);

class ExtractionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ExtractedPlan
{
  TrajectorySet trajectory;
  ObjectiveBreakdown breakdown;
  /// |breakdown.total() - solution.objective| / max(1, |solution.objective|).
  double objective_mismatch = 0.0;
};

/// Maps Pos/Vel/Acc values onto a TrajectorySet (intruders from the
/// scenario) and recomputes the cost terms from the trajectory itself.
ExtractedPlan extract_trajectories(
  const MilpModel& model, const Solution& solution, const Scenario& scenario);

} // namespace formation_avoid

#endif // FORMATION_AVOID_SOLVER_HPP
