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

#include "branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <queue>

namespace formation_avoid::mip {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kStrongCandidates = 8;
constexpr std::int64_t kStrongIterations = 150;
constexpr int kReliability = 1;
constexpr int kMaxPlunge = 40;

struct BoundChange
{
  int j;
  double lo;
  double hi;
};

struct Node
{
  std::vector<BoundChange> changes;
  double bound = -kInf;
  int depth = 0;
  std::shared_ptr<const lp::Basis> basis;
  std::int64_t id = 0;
  // Branching that created the node, for pseudo-cost learning.
  int branch_var = -1;
  bool branch_up = false;
  double branch_frac = 0.0;
};

struct NodeOrder
{
  bool operator()(const Node& a, const Node& b) const
  {
    if (a.bound != b.bound)
      return a.bound > b.bound;
    return a.id > b.id;
  }
};

class PseudoCosts
{
public:
  explicit PseudoCosts(int n) : sum_(2 * n, 0.0), count_(2 * n, 0) {}

  void record(int j, bool up, double gain_per_unit)
  {
    const int k = 2 * j + (up ? 1 : 0);
    sum_[k] += std::max(gain_per_unit, 0.0);
    ++count_[k];
    total_[up] += std::max(gain_per_unit, 0.0);
    ++total_count_[up];
  }

  int count(int j, bool up) const { return count_[2 * j + (up ? 1 : 0)]; }

  double estimate(int j, bool up) const
  {
    const int k = 2 * j + (up ? 1 : 0);
    if (count_[k] > 0)
      return sum_[k] / count_[k];
    return total_count_[up] > 0 ? total_[up] / total_count_[up] : 1.0;
  }

private:
  std::vector<double> sum_;
  std::vector<int> count_;
  double total_[2] = {0.0, 0.0};
  int total_count_[2] = {0, 0};
};

double score(double down, double up)
{
  constexpr double eps = 1e-6;
  return std::max(down, eps) * std::max(up, eps);
}

class Solver
{
public:
  Solver(const lp::Problem& problem, const std::vector<char>& integer,
    const Options& options)
    : problem_(problem), integer_(integer), options_(options), lp_(problem),
      pseudo_(problem.a.cols)
  {
    start_ = lp::Clock::now();
    deadline_ = start_
      + std::chrono::duration_cast<lp::Clock::duration>(
        std::chrono::duration<double>(options.time_limit_s));
    root_lo_ = problem.col_lo;
    root_hi_ = problem.col_hi;
    for (int j = 0; j < problem.a.cols; ++j)
    {
      if (!integer_[j])
        continue;
      root_lo_[j] = std::ceil(root_lo_[j] - kIntTol);
      root_hi_[j] = std::floor(root_hi_[j] + kIntTol);
      lp_.set_col_bounds(j, root_lo_[j], root_hi_[j]);
    }
    lp_options_.deadline = deadline_;
    lp_options_.seed = options.seed;
  }

  Result run();

private:
  double cutoff() const
  {
    if (!std::isfinite(incumbent_))
      return kInf;
    return incumbent_ - std::max(options_.absolute_gap,
      options_.relative_gap * std::abs(incumbent_));
  }

  // Records a node bound discarded for reasons other than proven
  // dominance by the incumbent.
  void discard(double bound)
  {
    if (!std::isfinite(incumbent_) || bound < incumbent_ - options_.absolute_gap)
      floor_ = std::min(floor_, bound);
  }

  void apply(const Node& node);
  void set_bounds(int j, double lo, double hi);
  bool timed_out() const { return lp::Clock::now() > deadline_; }
  double elapsed() const
  {
    return std::chrono::duration<double>(lp::Clock::now() - start_).count();
  }
  void try_incumbent(double objective, const std::vector<double>& x);
  bool round_heuristic(const std::vector<double>& x);
  double global_bound(const std::optional<Node>& pending) const;
  void log(const char* tag, const std::optional<Node>& pending) const;

  const lp::Problem& problem_;
  const std::vector<char>& integer_;
  Options options_;
  lp::DualSimplex lp_;
  lp::Options lp_options_;
  PseudoCosts pseudo_;
  lp::Clock::time_point start_;
  lp::Clock::time_point deadline_;
  std::vector<double> root_lo_, root_hi_;
  std::vector<int> modified_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  double incumbent_ = kInf;
  std::vector<double> incumbent_x_;
  double floor_ = kInf;
  std::int64_t nodes_ = 0;
  std::int64_t next_id_ = 1;
  mutable double last_log_ = 0.0;
};

void Solver::set_bounds(int j, double lo, double hi)
{
  lp_.set_col_bounds(j, lo, hi);
  modified_.push_back(j);
}

void Solver::apply(const Node& node)
{
  for (int j : modified_)
    lp_.set_col_bounds(j, root_lo_[j], root_hi_[j]);
  modified_.clear();
  for (const BoundChange& c : node.changes)
    set_bounds(c.j, c.lo, c.hi);
}

void Solver::try_incumbent(double objective, const std::vector<double>& x)
{
  if (objective >= incumbent_)
    return;
  incumbent_ = objective;
  incumbent_x_ = x;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (integer_[j])
      incumbent_x_[j] = std::round(x[j]);
  if (options_.verbose)
    std::fprintf(stderr, "  incumbent %.6g at node %lld (%.1fs)\n", objective,
      static_cast<long long>(nodes_), elapsed());
}

// Rounds every integer column to the nearest value and checks all rows
// with the continuous columns unchanged.
bool Solver::round_heuristic(const std::vector<double>& x)
{
  const int n = problem_.a.cols;
  const int m = problem_.a.rows;
  std::vector<double> xr = x;
  for (int j = 0; j < n; ++j)
    if (integer_[j])
      xr[j] = std::round(x[j]);
  std::vector<double> act(m, 0.0);
  double obj = problem_.cost_offset;
  for (int j = 0; j < n; ++j)
  {
    obj += problem_.cost[j] * xr[j];
    for (int k = problem_.a.start[j]; k < problem_.a.start[j + 1]; ++k)
      act[problem_.a.index[k]] += problem_.a.value[k] * xr[j];
  }
  for (int i = 0; i < m; ++i)
  {
    const double tol = 1e-6 * (1.0 + std::abs(act[i]));
    if (act[i] < problem_.row_lo[i] - tol || act[i] > problem_.row_hi[i] + tol)
      return false;
  }
  try_incumbent(obj, xr);
  return true;
}

double Solver::global_bound(const std::optional<Node>& pending) const
{
  double b = std::min(floor_, incumbent_);
  if (!open_.empty())
    b = std::min(b, open_.top().bound);
  if (pending)
    b = std::min(b, pending->bound);
  return b;
}

void Solver::log(const char* tag, const std::optional<Node>& pending) const
{
  if (!options_.verbose)
    return;
  const double t = elapsed();
  if (t - last_log_ < 2.0 && tag[0] == '.')
    return;
  last_log_ = t;
  std::fprintf(stderr, "  %s nodes %lld open %zu bound %.6g incumbent %.6g (%.1fs)\n",
    tag, static_cast<long long>(nodes_), open_.size(), global_bound(pending),
    incumbent_, t);
}

Result Solver::run()
{
  Result result;
  const int n = problem_.a.cols;

  std::optional<Node> next = Node{};
  int plunge = 0;
  bool stopped = false;
  bool numerical = false;

  while (true)
  {
    Node node;
    if (next)
    {
      node = std::move(*next);
      next.reset();
    }
    else if (!open_.empty())
    {
      node = open_.top();
      open_.pop();
      plunge = 0;
    }
    else
    {
      break;
    }

    if (node.bound >= cutoff())
    {
      discard(node.bound);
      continue;
    }
    const double gap_now = incumbent_ - global_bound(node);
    if (std::isfinite(incumbent_)
      && gap_now <= std::max(options_.absolute_gap,
           options_.relative_gap * std::abs(incumbent_)))
    {
      open_.push(std::move(node));
      break;
    }
    if (timed_out()
      || (options_.node_limit >= 0 && nodes_ >= options_.node_limit))
    {
      open_.push(std::move(node));
      stopped = true;
      break;
    }

    apply(node);
    if (node.basis)
      lp_.set_basis(*node.basis);

    bool branched = false;
    while (true)
    {
      const lp::Status st = lp_.solve(lp_options_);
      if (st == lp::Status::TimeLimit)
      {
        open_.push(node);
        stopped = true;
        break;
      }
      if (st == lp::Status::Infeasible)
      {
        // After cutoff tightening, an infeasible root only prunes.
        if (nodes_ == 0 && !std::isfinite(incumbent_))
          result.status = Status::Infeasible;
        break;
      }
      if (st == lp::Status::Unbounded)
      {
        if (nodes_ == 0)
        {
          result.status = Status::Unbounded;
          result.lp_iterations = lp_.iterations();
          return result;
        }
        discard(node.bound);
        break;
      }
      if (st != lp::Status::Optimal)
      {
        numerical = true;
        discard(node.bound);
        break;
      }

      const double obj = lp_.objective();
      if (node.branch_var >= 0 && node.branch_frac > 0)
      {
        pseudo_.record(node.branch_var, node.branch_up,
          (obj - node.bound) / node.branch_frac);
        node.branch_var = -1;
      }
      node.bound = std::max(node.bound, obj);
      if (node.bound >= cutoff())
      {
        discard(node.bound);
        break;
      }

      const std::vector<double> x = lp_.col_values();
      std::vector<int> fractional;
      for (int j = 0; j < n; ++j)
      {
        if (!integer_[j])
          continue;
        const double f = x[j] - std::floor(x[j]);
        if (f > kIntTol && f < 1.0 - kIntTol)
          fractional.push_back(j);
      }
      if (fractional.empty())
      {
        try_incumbent(obj, x);
        break;
      }
      if (round_heuristic(x) && node.bound >= cutoff())
      {
        discard(node.bound);
        break;
      }

      // Candidate ranking by pseudo-cost score.
      std::vector<std::pair<double, int>> ranked;
      ranked.reserve(fractional.size());
      for (int j : fractional)
      {
        const double f = x[j] - std::floor(x[j]);
        ranked.emplace_back(
          score(f * pseudo_.estimate(j, false), (1 - f) * pseudo_.estimate(j, true)), j);
      }
      std::stable_sort(ranked.begin(), ranked.end(),
        [](const auto& a, const auto& b) { return a.first > b.first; });

      // Strong branching on unreliable candidates, most fractional first.
      std::vector<int> unreliable;
      for (int j : fractional)
        if (std::min(pseudo_.count(j, false), pseudo_.count(j, true)) < kReliability)
          unreliable.push_back(j);
      std::stable_sort(unreliable.begin(), unreliable.end(), [&](int a, int b) {
        const double fa = std::abs(x[a] - std::floor(x[a]) - 0.5);
        const double fb = std::abs(x[b] - std::floor(x[b]) - 0.5);
        return fa < fb;
      });
      if (unreliable.size() > static_cast<std::size_t>(kStrongCandidates))
        unreliable.resize(kStrongCandidates);

      int best_j = ranked.front().second;
      double best_score = ranked.front().first;
      double best_down = obj;
      double best_up = obj;
      bool have_strong = false;
      std::optional<BoundChange> tighten;
      bool node_infeasible = false;

      if (!unreliable.empty())
      {
        const auto basis = std::make_shared<const lp::Basis>(lp_.basis());
        lp::Options sb = lp_options_;
        sb.max_iterations = kStrongIterations;
        sb.perturb = false;
        best_score = -1.0;
        for (int j : unreliable)
        {
          const double lo = lp_.col_lo(j);
          const double hi = lp_.col_hi(j);
          const double fl = std::floor(x[j]);
          double child[2];
          for (int up = 0; up < 2; ++up)
          {
            if (up)
              lp_.set_col_bounds(j, fl + 1, hi);
            else
              lp_.set_col_bounds(j, lo, fl);
            lp_.set_basis(*basis);
            const lp::Status cs = lp_.solve(sb);
            if (cs == lp::Status::Infeasible)
              child[up] = kInf;
            else if (cs == lp::Status::Optimal || cs == lp::Status::IterationLimit)
              child[up] = std::max(obj, lp_.objective());
            else
              child[up] = obj;
          }
          lp_.set_col_bounds(j, lo, hi);
          const double f = x[j] - fl;
          if (std::isfinite(child[0]))
            pseudo_.record(j, false, (child[0] - obj) / f);
          if (std::isfinite(child[1]))
            pseudo_.record(j, true, (child[1] - obj) / (1 - f));
          if (!std::isfinite(child[0]) && !std::isfinite(child[1]))
          {
            node_infeasible = true;
            break;
          }
          if (!std::isfinite(child[0]) || child[0] >= cutoff())
          {
            if (std::isfinite(child[0]))
              discard(child[0]);
            tighten = BoundChange{j, fl + 1, hi};
            break;
          }
          if (!std::isfinite(child[1]) || child[1] >= cutoff())
          {
            if (std::isfinite(child[1]))
              discard(child[1]);
            tighten = BoundChange{j, lo, fl};
            break;
          }
          const double sc = score(child[0] - obj, child[1] - obj);
          if (sc > best_score)
          {
            best_score = sc;
            best_j = j;
            best_down = child[0];
            best_up = child[1];
            have_strong = true;
          }
          if (timed_out())
            break;
        }
        lp_.set_basis(*basis);
        if (node_infeasible)
          break;
        if (tighten)
        {
          node.changes.push_back(*tighten);
          set_bounds(tighten->j, tighten->lo, tighten->hi);
          continue;
        }
        if (!have_strong)
        {
          best_j = ranked.front().second;
          best_down = best_up = obj;
        }
      }

      // Children.
      const double xj = x[best_j];
      const double fl = std::floor(xj);
      const double f = xj - fl;
      const auto basis = std::make_shared<const lp::Basis>(lp_.basis());
      Node down;
      down.changes = node.changes;
      down.changes.push_back({best_j, lp_.col_lo(best_j), fl});
      down.bound = std::max(obj, have_strong ? best_down : obj);
      down.depth = node.depth + 1;
      down.basis = basis;
      down.id = next_id_++;
      down.branch_var = have_strong ? -1 : best_j;
      down.branch_up = false;
      down.branch_frac = f;
      Node up = down;
      up.changes.back() = {best_j, fl + 1, lp_.col_hi(best_j)};
      up.bound = std::max(obj, have_strong ? best_up : obj);
      up.id = next_id_++;
      up.branch_up = true;
      up.branch_frac = 1 - f;

      const double est_down = have_strong ? best_down - obj : f * pseudo_.estimate(best_j, false);
      const double est_up = have_strong ? best_up - obj : (1 - f) * pseudo_.estimate(best_j, true);
      const bool prefer_up = est_up < est_down || (est_up == est_down && f >= 0.5);
      Node& first = prefer_up ? up : down;
      Node& second = prefer_up ? down : up;

      const bool dive = !std::isfinite(incumbent_) || plunge < kMaxPlunge;
      if (dive && first.bound < cutoff())
      {
        ++plunge;
        next = std::move(first);
        if (second.bound < cutoff())
          open_.push(std::move(second));
        else
          discard(second.bound);
      }
      else
      {
        for (Node* c : {&first, &second})
        {
          if (c->bound < cutoff())
            open_.push(std::move(*c));
          else
            discard(c->bound);
        }
      }
      branched = true;
      break;
    }
    ++nodes_;
    (void)branched;
    log(".", next);
    if (stopped)
      break;
    if (nodes_ == 1 && result.status == Status::Infeasible)
    {
      result.nodes = nodes_;
      result.lp_iterations = lp_.iterations();
      return result;
    }
  }

  result.nodes = nodes_;
  result.lp_iterations = lp_.iterations();
  if (!std::isfinite(incumbent_))
  {
    if (stopped)
    {
      result.status = Status::NoSolution;
      result.bound = global_bound(next);
    }
    else if (numerical)
    {
      result.status = Status::NumericalFailure;
      result.message = "LP solver failed on one or more nodes";
    }
    else
    {
      result.status = Status::Infeasible;
    }
    return result;
  }

  result.objective = incumbent_;
  result.values = incumbent_x_;
  result.bound = std::min(global_bound(next), incumbent_);
  const double gap = incumbent_ - result.bound;
  result.status = gap <= options_.absolute_gap ? Status::Optimal : Status::FeasibleWithGap;
  log("done", next);
  return result;
}

} // namespace

Result branch_and_bound(const lp::Problem& problem,
  const std::vector<char>& integer, const Options& options)
{
  Solver solver(problem, integer, options);
  return solver.run();
}

} // namespace formation_avoid::mip
