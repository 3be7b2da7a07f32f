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

#ifndef FORMATION_AVOID_LP_FORMAT_HPP
#define FORMATION_AVOID_LP_FORMAT_HPP

#include <formation_avoid/milp_model.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace formation_avoid {

class LpFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Writes the model in CPLEX LP text format. Every variable gets an explicit
/// bound line, in ordinal order; the objective constant is written as a bare
/// numeric term. Output is byte-identical for identical models.
std::string export_lp(const MilpModel& model);

/// Reads LP text produced by export_lp (and the common subset of the
/// format). Variable names must be canonical names; ordinals follow the
/// order of the Bounds section, then first appearance.
MilpModel read_lp(std::string_view text);

} // namespace formation_avoid

#endif // FORMATION_AVOID_LP_FORMAT_HPP
