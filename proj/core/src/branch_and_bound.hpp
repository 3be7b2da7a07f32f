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

#ifndef FORMATION_AVOID_BRANCH_AND_BOUND_HPP
#define FORMATION_AVOID_BRANCH_AND_BOUND_HPP

#include "lp_simplex.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace formation_avoid::mip {

struct Options
{
  double relative_gap = 0.01;
  double absolute_gap = 1e-6;
  double time_limit_s = 900.0;
  std::uint64_t seed = 0;
  std::int64_t node_limit = -1;
  bool verbose = false;
};

enum class Status
{
  Optimal,
  FeasibleWithGap,
  Infeasible,
  Unbounded,
  NoSolution,
  NumericalFailure,
};

struct Result
{
  Status status = Status::NoSolution;
  double objective = std::numeric_limits<double>::infinity();
  /// Proven lower bound on the optimum.
  double bound = -std::numeric_limits<double>::infinity();
  std::vector<double> values;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  std::string message;
};

/// LP-based branch and bound over the columns flagged in `integer`.
/// Depth-first until the first incumbent, then best-bound with plunging;
/// variables are picked by pseudo-costs initialized with strong branching.
/// Stops when (incumbent - bound) <= max(absolute_gap,
/// relative_gap * |incumbent|) or at the time/node limit.
Result branch_and_bound(const lp::Problem& problem,
  const std::vector<char>& integer, const Options& options);

} // namespace formation_avoid::mip

#endif // FORMATION_AVOID_BRANCH_AND_BOUND_HPP
