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

// Bounded dual simplex for
//
//   min c'x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
//
// Internally each row i gets a logical s_i = (A x)_i with bounds
// [row_lo_i, row_hi_i], so the working matrix is [A | -I] with zero
// right-hand side. Every variable is kept boxed: infinite row bounds are
// replaced by the activity range implied by the column bounds and infinite
// column bounds by a large artificial box. With all variables boxed, any
// basis can be made dual feasible by moving nonbasic variables to the
// bound matching their reduced-cost sign, so no dual phase one is needed.

#ifndef FORMATION_AVOID_LP_SIMPLEX_HPP
#define FORMATION_AVOID_LP_SIMPLEX_HPP

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace formation_avoid::lp {

/// Compressed sparse column matrix.
struct SparseColumns
{
  int rows = 0;
  int cols = 0;
  std::vector<int> start{0};
  std::vector<int> index;
  std::vector<double> value;
};

struct Problem
{
  SparseColumns a;
  std::vector<double> cost;
  std::vector<double> col_lo, col_hi;
  std::vector<double> row_lo, row_hi;
  double cost_offset = 0.0;
};

enum class Status
{
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  TimeLimit,
  NumericalFailure,
};

const char* to_string(Status status);

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

/// States of the n structural columns followed by the m logicals.
struct Basis
{
  std::vector<VarState> state;
};

using Clock = std::chrono::steady_clock;

struct Options
{
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  std::int64_t max_iterations = 1'000'000;
  std::optional<Clock::time_point> deadline;
  bool perturb = true;
  std::uint64_t seed = 0;
};

class DualSimplex
{
public:
  explicit DualSimplex(const Problem& problem);
  ~DualSimplex();

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }

  /// Bounds in the caller's units. Takes effect on the next solve.
  void set_col_bounds(int j, double lo, double hi);
  double col_lo(int j) const { return lo_[j] * col_scale_[j]; }
  double col_hi(int j) const { return hi_[j] * col_scale_[j]; }

  Basis basis() const;
  /// Installs a basis. Falls back to the slack basis if the count of basic
  /// variables is wrong or the basis matrix is singular.
  void set_basis(const Basis& basis);

  Status solve(const Options& options);

  /// Objective in the caller's units, including the constant offset.
  double objective() const;
  std::vector<double> col_values() const;
  /// Row activities (A x).
  std::vector<double> row_values() const;
  std::vector<double> reduced_costs() const;

  std::int64_t iterations() const { return total_iterations_; }

private:
  struct Eta
  {
    int r;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  void compute_scaling(const Problem& p);
  void slack_basis();
  bool refactor();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  void add_column(int j, double scale, Eigen::VectorXd& v) const;
  void compute_primal();
  void compute_duals();
  bool make_dual_feasible();
  double primal_infeasibility(int j) const;
  bool primal_feasible() const;
  void perturb_costs();
  Status iterate(const Options& options);
  bool at_artificial_bound(int j) const;

  int n_ = 0;
  int m_ = 0;
  // Scaled structural matrix, column and row copies.
  SparseColumns a_;
  std::vector<int> row_start_, row_index_;
  std::vector<double> row_value_;
  std::vector<double> col_scale_;  // x_j = col_scale_j * x'_j
  std::vector<double> row_scale_;  // s'_i = row_scale_i * s_i

  std::vector<double> cost_;       // working (possibly perturbed) costs
  std::vector<double> base_cost_;  // scaled unperturbed costs
  double cost_offset_ = 0.0;
  std::vector<double> lo_, hi_;
  std::vector<char> artificial_lo_, artificial_hi_;
  std::vector<double> x_, d_;
  std::vector<VarState> state_;
  std::vector<int> head_;  // basis position -> variable
  std::vector<int> pos_;   // variable -> basis position or -1
  std::vector<double> weight_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  bool factor_valid_ = false;
  bool perturbed_ = false;
  std::mt19937_64 rng_;
  std::int64_t total_iterations_ = 0;

  // Scratch.
  std::vector<double> alpha_row_;
  std::vector<int> alpha_touched_;
  std::vector<char> touched_mark_;
};

} // namespace formation_avoid::lp

#endif // FORMATION_AVOID_LP_SIMPLEX_HPP
