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

#ifndef FORMATION_AVOID_BACKENDS_HPP
#define FORMATION_AVOID_BACKENDS_HPP

#include "lp_simplex.hpp"

#include <formation_avoid/solver.hpp>

#include <memory>

namespace formation_avoid::detail {

/// Column-wise copy of a model; integer[j] flags binary columns.
struct LpImage
{
  lp::Problem problem;
  std::vector<char> integer;
};

LpImage to_lp(const MilpModel& model);

std::unique_ptr<MilpBackend> make_builtin_backend();

#ifdef FORMATION_AVOID_HAVE_HIGHS
std::unique_ptr<MilpBackend> make_highs_backend();
#endif

} // namespace formation_avoid::detail

#endif // FORMATION_AVOID_BACKENDS_HPP
