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

#include "lp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace formation_avoid::lp {

namespace {

constexpr double kArtificialBound = 1e9;
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr double kMinWeight = 1e-8;
constexpr std::size_t kRefactorInterval = 100;
constexpr int kMaxNumericalRetries = 8;

double power_of_two(double v)
{
  if (!(v > 0) || !std::isfinite(v))
    return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

struct Candidate
{
  int j;
  double ratio;
  double harris;
  double abs_alpha;
};

} // namespace

const char* to_string(Status status)
{
  switch (status)
  {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::IterationLimit:
      return "iteration limit";
    case Status::TimeLimit:
      return "time limit";
    case Status::NumericalFailure:
      break;
  }
  return "numerical failure";
}

DualSimplex::DualSimplex(const Problem& p) : n_(p.a.cols), m_(p.a.rows)
{
  if (static_cast<int>(p.cost.size()) != n_ || static_cast<int>(p.col_lo.size()) != n_
    || static_cast<int>(p.col_hi.size()) != n_ || static_cast<int>(p.row_lo.size()) != m_
    || static_cast<int>(p.row_hi.size()) != m_
    || static_cast<int>(p.a.start.size()) != n_ + 1)
    throw std::invalid_argument("lp::Problem: inconsistent dimensions");

  compute_scaling(p);

  // Scaled column copy.
  a_ = p.a;
  for (int j = 0; j < n_; ++j)
    for (int k = a_.start[j]; k < a_.start[j + 1]; ++k)
      a_.value[k] *= row_scale_[a_.index[k]] * col_scale_[j];

  // Row copy.
  row_start_.assign(m_ + 1, 0);
  for (int k = 0; k < a_.start[n_]; ++k)
    ++row_start_[a_.index[k] + 1];
  for (int i = 0; i < m_; ++i)
    row_start_[i + 1] += row_start_[i];
  row_index_.resize(a_.index.size());
  row_value_.resize(a_.value.size());
  {
    std::vector<int> fill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < n_; ++j)
      for (int k = a_.start[j]; k < a_.start[j + 1]; ++k)
      {
        const int slot = fill[a_.index[k]]++;
        row_index_[slot] = j;
        row_value_[slot] = a_.value[k];
      }
  }

  const int total = n_ + m_;
  lo_.assign(total, 0.0);
  hi_.assign(total, 0.0);
  artificial_lo_.assign(total, 0);
  artificial_hi_.assign(total, 0);
  base_cost_.assign(total, 0.0);
  cost_offset_ = p.cost_offset;
  for (int j = 0; j < n_; ++j)
  {
    base_cost_[j] = p.cost[j] * col_scale_[j];
    set_col_bounds(j, p.col_lo[j], p.col_hi[j]);
  }
  // Activity range implied by the column bounds, used to box logicals
  // whose row bounds are infinite.
  std::vector<double> act_lo(m_, 0.0), act_hi(m_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (int k = p.a.start[j]; k < p.a.start[j + 1]; ++k)
    {
      const double a = p.a.value[k];
      const int i = p.a.index[k];
      act_lo[i] += a > 0 ? a * p.col_lo[j] : a * p.col_hi[j];
      act_hi[i] += a > 0 ? a * p.col_hi[j] : a * p.col_lo[j];
    }
  for (int i = 0; i < m_; ++i)
  {
    double lo = p.row_lo[i];
    double hi = p.row_hi[i];
    // Widened so the box never binds exactly; it is redundant either way.
    if (!std::isfinite(lo))
      lo = std::isfinite(act_lo[i])
        ? act_lo[i] - (1.0 + 1e-3 * std::abs(act_lo[i]))
        : -kArtificialBound;
    if (!std::isfinite(hi))
      hi = std::isfinite(act_hi[i])
        ? act_hi[i] + (1.0 + 1e-3 * std::abs(act_hi[i]))
        : kArtificialBound;
    artificial_lo_[n_ + i] = !std::isfinite(p.row_lo[i]) && !std::isfinite(act_lo[i]);
    artificial_hi_[n_ + i] = !std::isfinite(p.row_hi[i]) && !std::isfinite(act_hi[i]);
    lo_[n_ + i] = lo * row_scale_[i];
    hi_[n_ + i] = hi * row_scale_[i];
  }
  cost_ = base_cost_;
  x_.assign(total, 0.0);
  d_.assign(total, 0.0);
  state_.assign(total, VarState::AtLower);
  head_.assign(m_, 0);
  pos_.assign(total, -1);
  weight_.assign(m_, 1.0);
  alpha_row_.assign(total, 0.0);
  touched_mark_.assign(total, 0);
  slack_basis();
}

DualSimplex::~DualSimplex() = default;

void DualSimplex::compute_scaling(const Problem& p)
{
  col_scale_.assign(n_, 1.0);
  row_scale_.assign(m_, 1.0);
  if (p.a.value.empty())
    return;
  std::vector<double> rmax(m_), rmin(m_);
  for (int pass = 0; pass < 6; ++pass)
  {
    std::fill(rmax.begin(), rmax.end(), 0.0);
    std::fill(rmin.begin(), rmin.end(), std::numeric_limits<double>::infinity());
    for (int j = 0; j < n_; ++j)
      for (int k = p.a.start[j]; k < p.a.start[j + 1]; ++k)
      {
        const double v = std::abs(p.a.value[k]) * col_scale_[j];
        if (v == 0.0)
          continue;
        const int i = p.a.index[k];
        rmax[i] = std::max(rmax[i], v);
        rmin[i] = std::min(rmin[i], v);
      }
    for (int i = 0; i < m_; ++i)
      if (rmax[i] > 0)
        row_scale_[i] = 1.0 / std::sqrt(rmax[i] * rmin[i]);
    for (int j = 0; j < n_; ++j)
    {
      double cmax = 0.0;
      double cmin = std::numeric_limits<double>::infinity();
      for (int k = p.a.start[j]; k < p.a.start[j + 1]; ++k)
      {
        const double v = std::abs(p.a.value[k]) * row_scale_[p.a.index[k]];
        if (v == 0.0)
          continue;
        cmax = std::max(cmax, v);
        cmin = std::min(cmin, v);
      }
      if (cmax > 0)
        col_scale_[j] = 1.0 / std::sqrt(cmax * cmin);
    }
  }
  for (auto& s : row_scale_)
    s = power_of_two(s);
  for (auto& s : col_scale_)
    s = power_of_two(s);
}

void DualSimplex::set_col_bounds(int j, double lo, double hi)
{
  artificial_lo_[j] = !std::isfinite(lo);
  artificial_hi_[j] = !std::isfinite(hi);
  if (artificial_lo_[j])
    lo = -kArtificialBound;
  if (artificial_hi_[j])
    hi = kArtificialBound;
  lo_[j] = lo / col_scale_[j];
  hi_[j] = hi / col_scale_[j];
}

bool DualSimplex::at_artificial_bound(int j) const
{
  return (state_[j] == VarState::AtLower && artificial_lo_[j])
    || (state_[j] == VarState::AtUpper && artificial_hi_[j]);
}

void DualSimplex::slack_basis()
{
  for (int j = 0; j < n_; ++j)
  {
    state_[j] = base_cost_[j] >= 0 ? VarState::AtLower : VarState::AtUpper;
    pos_[j] = -1;
  }
  for (int i = 0; i < m_; ++i)
  {
    head_[i] = n_ + i;
    pos_[n_ + i] = i;
    state_[n_ + i] = VarState::Basic;
  }
  std::fill(weight_.begin(), weight_.end(), 1.0);
  factor_valid_ = false;
}

Basis DualSimplex::basis() const { return Basis{state_}; }

void DualSimplex::set_basis(const Basis& basis)
{
  const int total = n_ + m_;
  if (static_cast<int>(basis.state.size()) != total
    || std::count(basis.state.begin(), basis.state.end(), VarState::Basic) != m_)
  {
    slack_basis();
    return;
  }
  state_ = basis.state;
  int r = 0;
  for (int j = 0; j < total; ++j)
  {
    if (state_[j] == VarState::Basic)
    {
      head_[r] = j;
      pos_[j] = r++;
    }
    else
    {
      pos_[j] = -1;
    }
  }
  std::fill(weight_.begin(), weight_.end(), 1.0);
  if (!refactor())
    slack_basis();
}

bool DualSimplex::refactor()
{
  etas_.clear();
  if (m_ == 0)
  {
    factor_valid_ = true;
    return true;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 2);
  for (int r = 0; r < m_; ++r)
  {
    const int j = head_[r];
    if (j < n_)
    {
      for (int k = a_.start[j]; k < a_.start[j + 1]; ++k)
        triplets.emplace_back(a_.index[k], r, a_.value[k]);
    }
    else
    {
      triplets.emplace_back(j - n_, r, -1.0);
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  factor_valid_ = lu_.info() == Eigen::Success;
  if (factor_valid_)
  {
    // Reject numerically singular factors.
    const double logdet = lu_.logAbsDeterminant();
    if (!std::isfinite(logdet))
      factor_valid_ = false;
  }
  return factor_valid_;
}

void DualSimplex::ftran(Eigen::VectorXd& v) const
{
  if (m_ == 0)
    return;
  v = lu_.solve(v);
  for (const Eta& e : etas_)
  {
    const double zr = v[e.r] / e.pivot;
    if (zr != 0.0)
      for (std::size_t k = 0; k < e.index.size(); ++k)
        v[e.index[k]] -= e.value[k] * zr;
    v[e.r] = zr;
  }
}

void DualSimplex::btran(Eigen::VectorXd& v) const
{
  if (m_ == 0)
    return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it)
  {
    double s = 0.0;
    for (std::size_t k = 0; k < it->index.size(); ++k)
      s += v[it->index[k]] * it->value[k];
    v[it->r] = (v[it->r] - s) / it->pivot;
  }
  v = lu_.transpose().solve(v);
}

void DualSimplex::add_column(int j, double scale, Eigen::VectorXd& v) const
{
  if (j < n_)
  {
    for (int k = a_.start[j]; k < a_.start[j + 1]; ++k)
      v[a_.index[k]] += scale * a_.value[k];
  }
  else
  {
    v[j - n_] -= scale;
  }
}

void DualSimplex::compute_primal()
{
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  const int total = n_ + m_;
  for (int j = 0; j < total; ++j)
  {
    if (state_[j] == VarState::Basic)
      continue;
    x_[j] = state_[j] == VarState::AtUpper ? hi_[j] : lo_[j];
    if (x_[j] != 0.0)
      add_column(j, -x_[j], rhs);
  }
  ftran(rhs);
  for (int r = 0; r < m_; ++r)
    x_[head_[r]] = rhs[r];
}

void DualSimplex::compute_duals()
{
  Eigen::VectorXd y(m_);
  for (int r = 0; r < m_; ++r)
    y[r] = cost_[head_[r]];
  btran(y);
  for (int j = 0; j < n_; ++j)
  {
    if (state_[j] == VarState::Basic)
    {
      d_[j] = 0.0;
      continue;
    }
    double s = cost_[j];
    for (int k = a_.start[j]; k < a_.start[j + 1]; ++k)
      s -= y[a_.index[k]] * a_.value[k];
    d_[j] = s;
  }
  for (int i = 0; i < m_; ++i)
    d_[n_ + i] = state_[n_ + i] == VarState::Basic ? 0.0 : cost_[n_ + i] + y[i];
}

bool DualSimplex::make_dual_feasible()
{
  bool flipped = false;
  const double tol = 1e-7;
  for (int j = 0; j < n_ + m_; ++j)
  {
    if (state_[j] == VarState::Basic || lo_[j] == hi_[j])
      continue;
    if (state_[j] == VarState::AtLower && d_[j] < -tol)
    {
      state_[j] = VarState::AtUpper;
      flipped = true;
    }
    else if (state_[j] == VarState::AtUpper && d_[j] > tol)
    {
      state_[j] = VarState::AtLower;
      flipped = true;
    }
  }
  return flipped;
}

double DualSimplex::primal_infeasibility(int j) const
{
  if (x_[j] < lo_[j])
    return lo_[j] - x_[j];
  if (x_[j] > hi_[j])
    return x_[j] - hi_[j];
  return 0.0;
}

bool DualSimplex::primal_feasible() const
{
  for (int r = 0; r < m_; ++r)
    if (primal_infeasibility(head_[r]) > 1e-7)
      return false;
  return true;
}

void DualSimplex::perturb_costs()
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j)
    cmax = std::max(cmax, std::abs(base_cost_[j]));
  const double base = 5e-7 * std::max(1.0, std::min(cmax, 1e3));
  for (int j = 0; j < n_; ++j)
  {
    if (lo_[j] == hi_[j])
      continue;
    const double xi = base * (1.0 + std::abs(base_cost_[j])) * (1.0 + unit(rng_));
    switch (state_[j])
    {
      case VarState::AtLower:
        cost_[j] += xi;
        break;
      case VarState::AtUpper:
        cost_[j] -= xi;
        break;
      case VarState::Basic:
        cost_[j] += unit(rng_) < 0.5 ? xi : -xi;
        break;
    }
  }
  perturbed_ = true;
}

Status DualSimplex::solve(const Options& options)
{
  rng_.seed(options.seed);
  cost_ = base_cost_;
  perturbed_ = false;

  if (m_ == 0)
  {
    for (int j = 0; j < n_; ++j)
    {
      state_[j] = base_cost_[j] >= 0 ? VarState::AtLower : VarState::AtUpper;
      x_[j] = state_[j] == VarState::AtUpper ? hi_[j] : lo_[j];
      d_[j] = base_cost_[j];
      if (at_artificial_bound(j) && d_[j] != 0.0)
        return Status::Unbounded;
    }
    return Status::Optimal;
  }

  if (!factor_valid_ && !refactor())
  {
    slack_basis();
    if (!refactor())
      return Status::NumericalFailure;
  }
  compute_primal();
  compute_duals();
  if (options.perturb)
  {
    perturb_costs();
    compute_duals();
  }
  if (make_dual_feasible())
    compute_primal();

  for (int round = 0; round < 8; ++round)
  {
    const Status status = iterate(options);
    if (status != Status::Optimal)
    {
      if (perturbed_)
      {
        cost_ = base_cost_;
        perturbed_ = false;
        compute_duals();
      }
      return status;
    }
    cost_ = base_cost_;
    perturbed_ = false;
    if (!refactor())
    {
      slack_basis();
      if (!refactor())
        return Status::NumericalFailure;
    }
    compute_primal();
    compute_duals();
    if (make_dual_feasible())
      compute_primal();
    if (primal_feasible())
    {
      for (int j = 0; j < n_ + m_; ++j)
        if (state_[j] != VarState::Basic && at_artificial_bound(j)
          && std::abs(d_[j]) > options.dual_tol)
          return Status::Unbounded;
      return Status::Optimal;
    }
  }
  return Status::NumericalFailure;
}

Status DualSimplex::iterate(const Options& options)
{
  const std::int64_t start_iterations = total_iterations_;
  Eigen::VectorXd rho(m_), column(m_), tau(m_), flip_delta(m_);
  std::vector<Candidate> candidates;
  std::vector<int> flips;
  int numerical_retries = 0;

  auto recover = [&]() {
    if (!refactor())
    {
      slack_basis();
      if (!refactor())
        return false;
    }
    compute_primal();
    compute_duals();
    if (make_dual_feasible())
      compute_primal();
    return true;
  };

  while (true)
  {
    if (total_iterations_ - start_iterations >= options.max_iterations)
      return Status::IterationLimit;
    if (options.deadline && ((total_iterations_ & 15) == 0)
      && Clock::now() > *options.deadline)
      return Status::TimeLimit;
    if (etas_.size() >= kRefactorInterval && !recover())
      return Status::NumericalFailure;

    // Leaving row: largest squared infeasibility over its edge weight.
    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i)
    {
      const double inf = primal_infeasibility(head_[i]);
      if (inf <= options.primal_tol)
        continue;
      const double score = inf * inf / weight_[i];
      if (score > best)
      {
        best = score;
        r = i;
      }
    }
    if (r < 0)
      return Status::Optimal;

    const int p = head_[r];
    const bool to_lower = x_[p] < lo_[p];
    const double s = to_lower ? 1.0 : -1.0;
    const double target = to_lower ? lo_[p] : hi_[p];

    rho.setZero();
    rho[r] = 1.0;
    btran(rho);

    // Pivot row over nonbasic columns.
    for (int j : alpha_touched_)
    {
      alpha_row_[j] = 0.0;
      touched_mark_[j] = 0;
    }
    alpha_touched_.clear();
    for (int i = 0; i < m_; ++i)
    {
      const double ri = rho[i];
      if (std::abs(ri) < kDropTol)
        continue;
      for (int k = row_start_[i]; k < row_start_[i + 1]; ++k)
      {
        const int j = row_index_[k];
        if (state_[j] == VarState::Basic)
          continue;
        if (!touched_mark_[j])
        {
          touched_mark_[j] = 1;
          alpha_touched_.push_back(j);
        }
        alpha_row_[j] += ri * row_value_[k];
      }
      if (state_[n_ + i] != VarState::Basic)
      {
        alpha_row_[n_ + i] = -ri;
        touched_mark_[n_ + i] = 1;
        alpha_touched_.push_back(n_ + i);
      }
    }

    // Ratio test with bound flipping and Harris tolerances.
    candidates.clear();
    for (int j : alpha_touched_)
    {
      if (lo_[j] == hi_[j])
        continue;
      const double at = s * alpha_row_[j];
      if (std::abs(at) < kPivotTol)
        continue;
      if (state_[j] == VarState::AtLower && at < 0)
        candidates.push_back({j, std::max(d_[j], 0.0) / -at,
          (d_[j] + options.dual_tol) / -at, -at});
      else if (state_[j] == VarState::AtUpper && at > 0)
        candidates.push_back({j, std::max(-d_[j], 0.0) / at,
          (-d_[j] + options.dual_tol) / at, at});
    }
    std::sort(candidates.begin(), candidates.end(),
      [](const Candidate& x, const Candidate& y) {
        return x.ratio < y.ratio || (x.ratio == y.ratio && x.j < y.j);
      });

    flips.clear();
    int q = -1;
    double slope = std::abs(x_[p] - target);
    std::size_t first = 0;
    while (first < candidates.size())
    {
      double harris = std::numeric_limits<double>::infinity();
      for (std::size_t k = first; k < candidates.size(); ++k)
        harris = std::min(harris, candidates[k].harris);
      std::size_t last = first;
      double drop = 0.0;
      double best_alpha = -1.0;
      int best_j = -1;
      while (last < candidates.size() && candidates[last].ratio <= harris)
      {
        const Candidate& c = candidates[last];
        drop += c.abs_alpha * (hi_[c.j] - lo_[c.j]);
        if (c.abs_alpha > best_alpha)
        {
          best_alpha = c.abs_alpha;
          best_j = c.j;
        }
        ++last;
      }
      if (last == first)
      {
        // Degenerate Harris bound; take the next breakpoint alone.
        const Candidate& c = candidates[first];
        drop = c.abs_alpha * (hi_[c.j] - lo_[c.j]);
        best_j = c.j;
        last = first + 1;
      }
      if (slope - drop > options.primal_tol && last == candidates.size())
      {
        // Every breakpoint passed with the dual objective still rising.
        q = -1;
        break;
      }
      if (slope - drop > 0 && last < candidates.size())
      {
        for (std::size_t k = first; k < last; ++k)
          flips.push_back(candidates[k].j);
        slope -= drop;
        first = last;
        continue;
      }
      q = best_j;
      break;
    }

    if (q < 0)
    {
      if (!etas_.empty() && numerical_retries < kMaxNumericalRetries)
      {
        ++numerical_retries;
        if (!recover())
          return Status::NumericalFailure;
        continue;
      }
      return Status::Infeasible;
    }

    column.setZero();
    add_column(q, 1.0, column);
    ftran(column);
    const double alpha_rq = alpha_row_[q];
    if (std::abs(column[r]) < kPivotTol
      || std::abs(column[r] - alpha_rq) > 1e-6 * (1.0 + std::abs(column[r])))
    {
      if (++numerical_retries > kMaxNumericalRetries || !recover())
        return Status::NumericalFailure;
      continue;
    }

    if (!flips.empty())
    {
      flip_delta.setZero();
      for (int j : flips)
      {
        const double next = state_[j] == VarState::AtLower ? hi_[j] : lo_[j];
        add_column(j, next - x_[j], flip_delta);
        x_[j] = next;
        state_[j] = state_[j] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      }
      ftran(flip_delta);
      for (int i = 0; i < m_; ++i)
        x_[head_[i]] -= flip_delta[i];
    }

    // Dual step.
    const double aq = s * alpha_row_[q];
    const double t = std::max(0.0, -d_[q] / aq);
    for (int j : alpha_touched_)
      if (state_[j] != VarState::Basic)
        d_[j] += s * t * alpha_row_[j];
    d_[q] = 0.0;
    d_[p] = s * t;

    tau = rho;
    ftran(tau);

    // Primal step.
    const double pivot = column[r];
    const double theta = (x_[p] - target) / pivot;
    for (int i = 0; i < m_; ++i)
      if (column[i] != 0.0)
        x_[head_[i]] -= theta * column[i];
    x_[q] += theta;
    x_[p] = target;

    // Dual steepest-edge weights.
    const double wr = rho.squaredNorm();
    for (int i = 0; i < m_; ++i)
    {
      if (i == r || column[i] == 0.0)
        continue;
      const double k = column[i] / pivot;
      weight_[i] = std::max(weight_[i] + k * (k * wr - 2.0 * tau[i]), kMinWeight);
    }
    weight_[r] = std::max(wr / (pivot * pivot), kMinWeight);

    head_[r] = q;
    pos_[q] = r;
    state_[q] = VarState::Basic;
    pos_[p] = -1;
    state_[p] = to_lower ? VarState::AtLower : VarState::AtUpper;

    Eta eta;
    eta.r = r;
    eta.pivot = pivot;
    for (int i = 0; i < m_; ++i)
      if (i != r && std::abs(column[i]) > kDropTol)
      {
        eta.index.push_back(i);
        eta.value.push_back(column[i]);
      }
    etas_.push_back(std::move(eta));
    ++total_iterations_;
    numerical_retries = 0;
  }
}

double DualSimplex::objective() const
{
  double total = cost_offset_;
  for (int j = 0; j < n_; ++j)
    total += base_cost_[j] * x_[j];
  return total;
}

std::vector<double> DualSimplex::col_values() const
{
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j)
    out[j] = x_[j] * col_scale_[j];
  return out;
}

std::vector<double> DualSimplex::row_values() const
{
  std::vector<double> out(m_);
  for (int i = 0; i < m_; ++i)
    out[i] = x_[n_ + i] / row_scale_[i];
  return out;
}

std::vector<double> DualSimplex::reduced_costs() const
{
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j)
    out[j] = d_[j] / col_scale_[j];
  return out;
}

} // namespace formation_avoid::lp
