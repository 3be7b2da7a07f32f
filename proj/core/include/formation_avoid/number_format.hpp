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

#ifndef FORMATION_AVOID_NUMBER_FORMAT_HPP
#define FORMATION_AVOID_NUMBER_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

namespace formation_avoid {

/// Shortest decimal text that parses back to exactly `value`. Locale
/// independent, so output is identical across platforms. Negative zero is
/// written as "0".
inline std::string format_number(double value)
{
  if (value == 0.0)
    return "0";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

/// Strict parse of a whole token as a double. Accepts "inf"/"infinity"
/// with optional sign.
inline bool parse_number(std::string_view text, double& out)
{
  if (text.empty())
    return false;
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-')
  {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body == "inf" || body == "infinity" || body == "Inf" || body == "INF"
    || body == "Infinity")
  {
    out = negative ? -HUGE_VAL : HUGE_VAL;
    return true;
  }
  if (text.front() == '+')
    text.remove_prefix(1);
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

} // namespace formation_avoid

#endif // FORMATION_AVOID_NUMBER_FORMAT_HPP
