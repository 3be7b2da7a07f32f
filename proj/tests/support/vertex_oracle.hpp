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

// Dense vertex enumeration for tiny LPs, used as an independent optimum.

#ifndef FORMATION_AVOID_TESTS_VERTEX_ORACLE_HPP
#define FORMATION_AVOID_TESTS_VERTEX_ORACLE_HPP

#include "lp_simplex.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

namespace formation_avoid::testing {

struct DenseLp
{
  int n = 0;
  std::vector<std::vector<double>> a;  // rows x n
  std::vector<double> row_lo, row_hi, col_lo, col_hi, cost;
  double offset = 0.0;

  lp::Problem to_problem() const
  {
    lp::Problem p;
    p.a.rows = static_cast<int>(a.size());
    p.a.cols = n;
    for (int j = 0; j < n; ++j)
    {
      for (int i = 0; i < p.a.rows; ++i)
        if (a[i][j] != 0.0)
        {
          p.a.index.push_back(i);
          p.a.value.push_back(a[i][j]);
        }
      p.a.start.push_back(static_cast<int>(p.a.index.size()));
    }
    p.cost = cost;
    p.col_lo = col_lo;
    p.col_hi = col_hi;
    p.row_lo = row_lo;
    p.row_hi = row_hi;
    p.cost_offset = offset;
    return p;
  }
};

/// Minimum over every feasible vertex; nullopt when infeasible. Requires
/// finite column bounds so the feasible set is a polytope.
inline std::optional<double> vertex_minimum(const DenseLp& lp, double tol = 1e-7)
{
  const int n = lp.n;
  std::vector<Eigen::VectorXd> g;
  std::vector<double> h;
  auto half = [&](Eigen::VectorXd row, double rhs) {
    g.push_back(std::move(row));
    h.push_back(rhs);
  };
  for (int j = 0; j < n; ++j)
  {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    half(e, lp.col_hi[j]);
    half(-e, -lp.col_lo[j]);
  }
  for (std::size_t i = 0; i < lp.a.size(); ++i)
  {
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(lp.a[i].data(), n);
    if (std::isfinite(lp.row_hi[i]))
      half(r, lp.row_hi[i]);
    if (std::isfinite(lp.row_lo[i]))
      half(-r, -lp.row_lo[i]);
  }
  const int planes = static_cast<int>(g.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  // Enumerate n-subsets of the planes in lexicographic order.
  for (int i = 0; i < n; ++i)
    pick[i] = i;
  while (true)
  {
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i)
    {
      m.row(i) = g[pick[i]].transpose();
      rhs[i] = h[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.isInvertible())
    {
      const Eigen::VectorXd x = lu.solve(rhs);
      bool ok = true;
      for (int k = 0; k < planes && ok; ++k)
        ok = g[k].dot(x) <= h[k] + tol * (1.0 + std::abs(h[k]));
      if (ok)
      {
        double value = lp.offset;
        for (int j = 0; j < n; ++j)
          value += lp.cost[j] * x[j];
        if (!best || value < *best)
          best = value;
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == planes - n + i)
      --i;
    if (i < 0)
      break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k)
      pick[k] = pick[k - 1] + 1;
  }
  return best;
}

} // namespace formation_avoid::testing

#endif // FORMATION_AVOID_TESTS_VERTEX_ORACLE_HPP
