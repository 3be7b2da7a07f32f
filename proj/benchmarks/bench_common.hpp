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


#ifndef FORMATION_AVOID_BENCHMARKS_BENCH_COMMON_HPP
#define FORMATION_AVOID_BENCHMARKS_BENCH_COMMON_HPP

#include <formation_avoid/scenario.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace formation_avoid::bench {

inline Scenario load(const std::string& name)
{
  std::ifstream in(std::string(FA_SCENARIO_DIR) + "/" + name, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

} // namespace formation_avoid::bench

#endif // FORMATION_AVOID_BENCHMARKS_BENCH_COMMON_HPP
