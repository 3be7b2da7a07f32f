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

#ifndef FORMATION_AVOID_MILP_MODEL_HPP
#define FORMATION_AVOID_MILP_MODEL_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace formation_avoid {

/// Variable families of the avoidance model.
enum class VarKind : std::uint8_t
{
  Pos,           // x(i,p,d)
  Vel,           // v(i,p,d)
  Acc,           // u(i,p,d)
  ManeuverSlack, // g(i,p,d) >= |u(i,p,d)|
  DragSlack,     // h(i,p,d) >= |x - drag-optimal position|
  SmoothSlack,   // k(i,p) >= |x(i,p,3) - x(i-1,p,3)|
  AtPlace,       // b(i,p) = 1 when p is at its designated position
  Sep,           // sep(i,p,q,d,s), formation pair disjunction
  Wake,          // wk(i,p,q,f), protected p vs generator q, box face f
  IntruderSep,   // a(i,p,r,d,s), intruder disjunction
  SlotAssign,    // y(p,slot)
};

/// Typed index of a model variable. All indices are 0-based; canonical
/// names print them 1-based. Field use per kind:
///   Pos/Vel/Acc/ManeuverSlack/DragSlack: step, a (aircraft), axis
///   SmoothSlack/AtPlace:                step, a
///   Sep:                                step, a, b (other aircraft), axis, side
///   Wake:                               step, a, b (generator), axis (face)
///   IntruderSep:                        step, a, b (intruder), axis, side
///   SlotAssign:                         a, b (slot)
/// Wake generators are numbered aircraft first (0..A-1), then intruders
/// (A..A+NI-1).
struct VarKey
{
  VarKind kind = VarKind::Pos;
  std::uint32_t step = 0;
  std::uint16_t a = 0;
  std::uint16_t b = 0;
  std::uint8_t axis = 0;
  std::uint8_t side = 0;

  static VarKey pos(std::size_t i, std::size_t p, std::size_t d);
  static VarKey vel(std::size_t i, std::size_t p, std::size_t d);
  static VarKey acc(std::size_t i, std::size_t p, std::size_t d);
  static VarKey maneuver(std::size_t i, std::size_t p, std::size_t d);
  static VarKey drag(std::size_t i, std::size_t p, std::size_t d);
  static VarKey smooth(std::size_t i, std::size_t p);
  static VarKey at_place(std::size_t i, std::size_t p);
  static VarKey sep(std::size_t i, std::size_t p, std::size_t q,
    std::size_t d, std::size_t s);
  static VarKey wake(std::size_t i, std::size_t p, std::size_t generator,
    std::size_t face);
  static VarKey intruder(std::size_t i, std::size_t p, std::size_t r,
    std::size_t d, std::size_t s);
  static VarKey slot(std::size_t p, std::size_t slot);

  std::uint64_t packed() const;

  friend bool operator==(const VarKey& x, const VarKey& y)
  {
    return x.packed() == y.packed();
  }
  friend auto operator<=>(const VarKey& x, const VarKey& y)
  {
    return x.packed() <=> y.packed();
  }
};

/// Canonical variable name, e.g. "x_3_1_2", "sep_1_1_2_3_2", "y_2_1".
std::string canonical_name(const VarKey& key);

/// Inverse of canonical_name; nullopt if the text is not a canonical name.
std::optional<VarKey> parse_canonical_name(std::string_view name);

/// Ordinal of a registered variable.
struct VarId
{
  std::int32_t value = -1;

  friend auto operator<=>(const VarId&, const VarId&) = default;
};

enum class VarType : std::uint8_t { Continuous, Binary };

struct Variable
{
  VarKey key;
  double lb = 0.0;
  double ub = 0.0;
  VarType type = VarType::Continuous;
};

struct LinTerm
{
  std::vector<std::pair<double, VarId>> terms;
  double constant = 0.0;

  LinTerm& add(double coefficient, VarId var)
  {
    terms.emplace_back(coefficient, var);
    return *this;
  }

  /// Sort by variable ordinal, merge duplicates, drop exact zeros.
  void canonicalize();
};

enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct LinConstraint
{
  LinTerm lhs;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
  std::string label;
};

class ModelError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Solver-agnostic MILP container. The objective is always minimized.
class MilpModel
{
public:
  VarId add_variable(const VarKey& key, double lb, double ub, VarType type);
  std::optional<VarId> find(const VarKey& key) const;
  /// Throws ModelError if the key is not registered.
  VarId id(const VarKey& key) const;

  const Variable& variable(VarId id) const { return vars_.at(id.value); }
  void set_bounds(VarId id, double lb, double ub);

  /// Canonicalizes the row, folds the lhs constant into rhs and checks the
  /// label is unique and every referenced variable exists.
  void add_constraint(LinConstraint row);

  void add_objective(double coefficient, VarId var);
  void add_objective_constant(double value);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinConstraint>& constraints() const { return rows_; }
  /// Canonical objective: nonzero coefficients in ordinal order.
  LinTerm objective() const;
  double objective_coefficient(VarId id) const { return obj_coef_.at(id.value); }
  double objective_constant() const { return obj_constant_; }
  std::size_t size() const { return vars_.size(); }
  std::size_t count(VarKind kind) const;
  std::size_t binary_count() const;
  /// Rows whose label starts with `prefix`.
  std::size_t count_rows(std::string_view prefix) const;

  /// Objective value at `values` (indexed by VarId).
  double evaluate_objective(const std::vector<double>& values) const;
  /// lhs value of a row at `values`.
  double evaluate_row(const LinConstraint& row,
    const std::vector<double>& values) const;

  /// Deterministic, platform-independent text of the whole model.
  std::string canonical_serialization() const;

private:
  std::vector<Variable> vars_;
  std::unordered_map<std::uint64_t, std::int32_t> index_;
  std::vector<LinConstraint> rows_;
  std::unordered_set<std::string> labels_;
  std::vector<double> obj_coef_;
  double obj_constant_ = 0.0;
};

} // namespace formation_avoid

#endif // FORMATION_AVOID_MILP_MODEL_HPP
