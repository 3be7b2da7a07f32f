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

#ifndef FORMATION_AVOID_VALIDATOR_HPP
#define FORMATION_AVOID_VALIDATOR_HPP

#include <formation_avoid/scenario.hpp>
#include <formation_avoid/trajectory.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formation_avoid {

inline constexpr double kDynamicsTolerance = 1e-6;     // ft, ft/s
inline constexpr double kEnvelopeTolerance = 1e-6;     // ft/s, ft/s^2
inline constexpr double kSeparationTolerance = 1e-4;   // ft
inline constexpr double kObjectiveAgreementTolerance = 1e-4;  // relative

enum class CheckFamily : std::size_t
{
  Dynamics,
  Envelope,
  FormationSeparation,
  IntruderSeparation,
  Wake,
  Terminal,
  CourseBounds,
};

inline constexpr std::size_t kCheckFamilies = 7;

/// Stable key used in the JSON report ("dynamics", "envelope", ...).
std::string_view family_key(CheckFamily family);

struct ResidualLocation
{
  std::size_t step = 0;
  std::size_t aircraft = 0;
  std::optional<std::size_t> axis;
  /// Other party of a pairwise check: aircraft id ("2") or intruder ("I1").
  std::optional<std::string> other;

  friend bool operator==(const ResidualLocation&, const ResidualLocation&) = default;
};

/// Residuals are margins: positive means satisfied with room to spare; a
/// residual below -tolerance is a violation.
struct FamilyResult
{
  double tolerance = 0.0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::optional<double> worst_residual;
  std::optional<ResidualLocation> worst_location;
  /// First violation in check order (step-major for pairwise families).
  std::optional<ResidualLocation> first_violation;

  bool pass() const { return violations == 0; }

  friend bool operator==(const FamilyResult&, const FamilyResult&) = default;
};

struct SubStepViolation
{
  /// Instant at which the violation holds; gaps are evaluated there.
  double time_s = 0.0;
  /// Start of the violation interval (equals time_s for samples).
  double onset_s = 0.0;
  AxisTriple gaps;

  friend bool operator==(const SubStepViolation&, const SubStepViolation&) = default;
};

struct InterpolatedSeparation
{
  /// Smallest |gap| per axis over all samples.
  AxisTriple min_gaps;
  /// Violations found at the samples, in time order.
  std::vector<SubStepViolation> sampled;
  /// One entry per step interval whose exact violation set is non-empty,
  /// timed at the midpoint of that set.
  std::vector<SubStepViolation> exact;

  bool violated() const { return !sampled.empty() || !exact.empty(); }

  friend bool operator==(const InterpolatedSeparation&,
    const InterpolatedSeparation&) = default;
};

/// Linear interpolation of both tracks inside each step. Samples sit at
/// fractions j / (samples_per_step - 1) of every step, so 2 samples per step
/// reproduces the discrete endpoint check. Independently, the per-axis gaps
/// are linear within a step, so the set of instants where every axis is
/// short of min_sep is an intersection of open intervals; any non-empty
/// intersection is reported in `exact`.
/// Throws std::invalid_argument if samples_per_step < 2 or lengths differ.
InterpolatedSeparation interpolated_min_separation(const Track& a, const Track& b,
  double dt, const AxisTriple& min_sep, std::size_t samples_per_step);

struct PairFinding
{
  std::string first;
  std::string second;
  InterpolatedSeparation separation;

  friend bool operator==(const PairFinding&, const PairFinding&) = default;
};

/// Sub-step findings. Advisory: they never change ValidationReport::pass().
struct InterpolatedReport
{
  std::size_t samples_per_step = 0;
  std::vector<PairFinding> violating_pairs;

  friend bool operator==(const InterpolatedReport&, const InterpolatedReport&) = default;
};

struct ValidationReport
{
  std::array<FamilyResult, kCheckFamilies> families{};
  std::optional<InterpolatedReport> interpolated;

  const FamilyResult& family(CheckFamily f) const
  {
    return families[static_cast<std::size_t>(f)];
  }
  bool pass() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct ValidateOptions
{
  /// When set, every aircraft/aircraft and aircraft/intruder pair is also
  /// checked between steps.
  std::optional<std::size_t> samples_per_step;
};

/// Re-derives every constraint from positions, velocities and
/// accelerations alone. Throws ValidationError if the trajectory shape
/// does not match the scenario.
ValidationReport validate(
  const TrajectorySet& traj, const Scenario& s, const ValidateOptions& options = {});

/// JSON document with stable keys; see README.
std::string validation_report_json(const ValidationReport& report);

} // namespace formation_avoid

#endif // FORMATION_AVOID_VALIDATOR_HPP
