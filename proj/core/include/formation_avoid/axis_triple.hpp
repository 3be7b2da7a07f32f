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

#ifndef FORMATION_AVOID_AXIS_TRIPLE_HPP
#define FORMATION_AVOID_AXIS_TRIPLE_HPP

#include <array>
#include <cstddef>
#include <ostream>

namespace formation_avoid {

/// Number of spatial axes. Axis 0 is along-course, 1 is lateral (positive
/// left of course), 2 is vertical (positive up).
inline constexpr std::size_t kAxes = 3;

/// A value per spatial axis. Units depend on context (ft, ft/s, ft/s^2).
struct AxisTriple
{
  std::array<double, kAxes> values{0.0, 0.0, 0.0};

  constexpr AxisTriple() = default;
  constexpr AxisTriple(double along, double lateral, double vertical)
  : values{along, lateral, vertical}
  {
  }

  constexpr double& operator[](std::size_t axis) { return values[axis]; }
  constexpr double operator[](std::size_t axis) const { return values[axis]; }

  constexpr double along() const { return values[0]; }
  constexpr double lateral() const { return values[1]; }
  constexpr double vertical() const { return values[2]; }

  constexpr AxisTriple& operator+=(const AxisTriple& other)
  {
    for (std::size_t d = 0; d < kAxes; ++d)
      values[d] += other.values[d];
    return *this;
  }

  constexpr AxisTriple& operator-=(const AxisTriple& other)
  {
    for (std::size_t d = 0; d < kAxes; ++d)
      values[d] -= other.values[d];
    return *this;
  }

  constexpr AxisTriple& operator*=(double scale)
  {
    for (auto& v : values)
      v *= scale;
    return *this;
  }

  friend constexpr AxisTriple operator+(AxisTriple a, const AxisTriple& b)
  {
    return a += b;
  }

  friend constexpr AxisTriple operator-(AxisTriple a, const AxisTriple& b)
  {
    return a -= b;
  }

  friend constexpr AxisTriple operator*(AxisTriple a, double scale)
  {
    return a *= scale;
  }

  friend constexpr AxisTriple operator*(double scale, AxisTriple a)
  {
    return a *= scale;
  }

  friend constexpr bool operator==(const AxisTriple&, const AxisTriple&) =
    default;
};

inline std::ostream& operator<<(std::ostream& os, const AxisTriple& t)
{
  return os << '(' << t[0] << ", " << t[1] << ", " << t[2] << ')';
}

} // namespace formation_avoid

#endif // FORMATION_AVOID_AXIS_TRIPLE_HPP
