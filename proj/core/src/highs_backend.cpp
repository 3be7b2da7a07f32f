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

#include <Highs.h>

#include <cmath>
#include <limits>

namespace formation_avoid::detail {
namespace {

class HighsBackend final : public MilpBackend
{
public:
  std::string name() const override { return kHighsBackend; }

  Solution solve(const MilpModel& model, const SolveOptions& options) const override
  {
    const LpImage img = to_lp(model);
    const lp::Problem& p = img.problem;

    HighsLp lp;
    lp.num_col_ = p.a.cols;
    lp.num_row_ = p.a.rows;
    lp.col_cost_ = p.cost;
    lp.col_lower_ = p.col_lo;
    lp.col_upper_ = p.col_hi;
    lp.row_lower_ = p.row_lo;
    lp.row_upper_ = p.row_hi;
    lp.offset_ = p.cost_offset;
    lp.a_matrix_.format_ = MatrixFormat::kColwise;
    lp.a_matrix_.num_col_ = p.a.cols;
    lp.a_matrix_.num_row_ = p.a.rows;
    lp.a_matrix_.start_ = p.a.start;
    lp.a_matrix_.index_ = p.a.index;
    lp.a_matrix_.value_ = p.a.value;
    lp.integrality_.resize(p.a.cols);
    for (int j = 0; j < p.a.cols; ++j)
      lp.integrality_[j] = img.integer[j] ? HighsVarType::kInteger : HighsVarType::kContinuous;

    Highs highs;
    highs.setOptionValue("output_flag", options.verbose);
    highs.setOptionValue("mip_rel_gap", options.relative_gap_target);
    highs.setOptionValue("time_limit", options.time_limit_s);
    highs.setOptionValue("random_seed", static_cast<int>(options.seed % 2147483647u));
    highs.setOptionValue("threads", 1);
    if (highs.passModel(std::move(lp)) == HighsStatus::kError)
      throw BackendError(name(), "model rejected");
    if (highs.run() == HighsStatus::kError)
      throw BackendError(name(), "run failed with model status "
        + highs.modelStatusToString(highs.getModelStatus()));

    const HighsInfo& info = highs.getInfo();
    Solution sol;
    sol.stats.backend = name();
    sol.stats.nodes = info.mip_node_count;
    sol.stats.lp_iterations = info.simplex_iteration_count;
    sol.best_bound = info.mip_dual_bound;
    const bool has_point = info.primal_solution_status == kSolutionStatusFeasible;

    switch (highs.getModelStatus())
    {
      case HighsModelStatus::kInfeasible:
        sol.status = SolveStatus::Infeasible;
        return sol;
      case HighsModelStatus::kUnbounded:
      case HighsModelStatus::kUnboundedOrInfeasible:
        sol.status = SolveStatus::Unbounded;
        return sol;
      case HighsModelStatus::kOptimal:
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        break;
      default:
        throw BackendError(name(), "unexpected model status "
          + highs.modelStatusToString(highs.getModelStatus()));
    }
    if (!has_point)
    {
      sol.status = SolveStatus::TimedOutNoSolution;
      return sol;
    }
    sol.values = highs.getSolution().col_value;
    sol.objective = info.objective_function_value;
    if (!std::isfinite(sol.best_bound))
      sol.best_bound = -std::numeric_limits<double>::infinity();
    sol.relative_gap = relative_gap(sol.objective, sol.best_bound);
    sol.status = sol.objective - sol.best_bound <= 1e-6
      ? SolveStatus::Optimal
      : SolveStatus::FeasibleWithGap;
    return sol;
  }
};

} // namespace

std::unique_ptr<MilpBackend> make_highs_backend()
{
  return std::make_unique<HighsBackend>();
}

} // namespace formation_avoid::detail
