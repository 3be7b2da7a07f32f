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

#include <formation_avoid/milp_model.hpp>
#include <formation_avoid/number_format.hpp>

#include <algorithm>
#include <array>
#include <charconv>

namespace formation_avoid {

namespace {

VarKey make(VarKind kind, std::size_t step, std::size_t a, std::size_t b,
  std::size_t axis, std::size_t side)
{
  VarKey key;
  key.kind = kind;
  key.step = static_cast<std::uint32_t>(step);
  key.a = static_cast<std::uint16_t>(a);
  key.b = static_cast<std::uint16_t>(b);
  key.axis = static_cast<std::uint8_t>(axis);
  key.side = static_cast<std::uint8_t>(side);
  return key;
}

struct NameLayout
{
  VarKind kind;
  std::string_view prefix;
  // Which fields appear, in order: 's'tep, 'a', 'b', 'x' (axis), 'S'ide.
  std::string_view fields;
};

constexpr std::array<NameLayout, 11> kLayouts{{
  {VarKind::Pos, "x", "sax"},
  {VarKind::Vel, "v", "sax"},
  {VarKind::Acc, "u", "sax"},
  {VarKind::ManeuverSlack, "g", "sax"},
  {VarKind::DragSlack, "h", "sax"},
  {VarKind::SmoothSlack, "k", "sa"},
  {VarKind::AtPlace, "b", "sa"},
  {VarKind::Sep, "sep", "sabxS"},
  {VarKind::Wake, "wk", "sabx"},
  {VarKind::IntruderSep, "a", "sabxS"},
  {VarKind::SlotAssign, "y", "ab"},
}};

const NameLayout& layout_of(VarKind kind)
{
  return kLayouts[static_cast<std::size_t>(kind)];
}

const char* sense_text(Sense sense)
{
  switch (sense)
  {
    case Sense::LessEqual:
      return "<=";
    case Sense::GreaterEqual:
      return ">=";
    case Sense::Equal:
      break;
  }
  return "=";
}

} // namespace

VarKey VarKey::pos(std::size_t i, std::size_t p, std::size_t d)
{
  return make(VarKind::Pos, i, p, 0, d, 0);
}
VarKey VarKey::vel(std::size_t i, std::size_t p, std::size_t d)
{
  return make(VarKind::Vel, i, p, 0, d, 0);
}
VarKey VarKey::acc(std::size_t i, std::size_t p, std::size_t d)
{
  return make(VarKind::Acc, i, p, 0, d, 0);
}
VarKey VarKey::maneuver(std::size_t i, std::size_t p, std::size_t d)
{
  return make(VarKind::ManeuverSlack, i, p, 0, d, 0);
}
VarKey VarKey::drag(std::size_t i, std::size_t p, std::size_t d)
{
  return make(VarKind::DragSlack, i, p, 0, d, 0);
}
VarKey VarKey::smooth(std::size_t i, std::size_t p)
{
  return make(VarKind::SmoothSlack, i, p, 0, 0, 0);
}
VarKey VarKey::at_place(std::size_t i, std::size_t p)
{
  return make(VarKind::AtPlace, i, p, 0, 0, 0);
}
VarKey VarKey::sep(
  std::size_t i, std::size_t p, std::size_t q, std::size_t d, std::size_t s)
{
  return make(VarKind::Sep, i, p, q, d, s);
}
VarKey VarKey::wake(
  std::size_t i, std::size_t p, std::size_t generator, std::size_t face)
{
  return make(VarKind::Wake, i, p, generator, face, 0);
}
VarKey VarKey::intruder(
  std::size_t i, std::size_t p, std::size_t r, std::size_t d, std::size_t s)
{
  return make(VarKind::IntruderSep, i, p, r, d, s);
}
VarKey VarKey::slot(std::size_t p, std::size_t slot)
{
  return make(VarKind::SlotAssign, 0, p, slot, 0, 0);
}

std::uint64_t VarKey::packed() const
{
  return (static_cast<std::uint64_t>(kind) << 56)
    | (static_cast<std::uint64_t>(step) << 32)
    | (static_cast<std::uint64_t>(a) << 20) | (static_cast<std::uint64_t>(b) << 8)
    | (static_cast<std::uint64_t>(axis) << 4) | static_cast<std::uint64_t>(side);
}

std::string canonical_name(const VarKey& key)
{
  const NameLayout& layout = layout_of(key.kind);
  std::string name(layout.prefix);
  for (char f : layout.fields)
  {
    std::size_t value = 0;
    switch (f)
    {
      case 's':
        value = key.step;
        break;
      case 'a':
        value = key.a;
        break;
      case 'b':
        value = key.b;
        break;
      case 'x':
        value = key.axis;
        break;
      default:
        value = key.side;
        break;
    }
    name += '_';
    name += std::to_string(value + 1);
  }
  return name;
}

std::optional<VarKey> parse_canonical_name(std::string_view name)
{
  const auto underscore = name.find('_');
  if (underscore == std::string_view::npos)
    return std::nullopt;
  const std::string_view prefix = name.substr(0, underscore);
  const NameLayout* layout = nullptr;
  for (const auto& l : kLayouts)
  {
    if (l.prefix == prefix)
      layout = &l;
  }
  if (layout == nullptr)
    return std::nullopt;

  VarKey key;
  key.kind = layout->kind;
  std::string_view rest = name.substr(underscore + 1);
  for (std::size_t n = 0; n < layout->fields.size(); ++n)
  {
    const auto next = rest.find('_');
    const bool last = n + 1 == layout->fields.size();
    if (last != (next == std::string_view::npos))
      return std::nullopt;
    const std::string_view token = rest.substr(0, next);
    std::size_t value = 0;
    const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()
      || value == 0)
      return std::nullopt;
    --value;
    switch (layout->fields[n])
    {
      case 's':
        key.step = static_cast<std::uint32_t>(value);
        break;
      case 'a':
        key.a = static_cast<std::uint16_t>(value);
        break;
      case 'b':
        key.b = static_cast<std::uint16_t>(value);
        break;
      case 'x':
        key.axis = static_cast<std::uint8_t>(value);
        break;
      default:
        key.side = static_cast<std::uint8_t>(value);
        break;
    }
    if (!last)
      rest = rest.substr(next + 1);
  }
  return key;
}

void LinTerm::canonicalize()
{
  std::stable_sort(terms.begin(), terms.end(),
    [](const auto& x, const auto& y) { return x.second < y.second; });
  std::vector<std::pair<double, VarId>> merged;
  merged.reserve(terms.size());
  for (const auto& [coef, var] : terms)
  {
    if (!merged.empty() && merged.back().second == var)
      merged.back().first += coef;
    else
      merged.emplace_back(coef, var);
  }
  std::erase_if(merged, [](const auto& t) { return t.first == 0.0; });
  terms = std::move(merged);
}

VarId MilpModel::add_variable(
  const VarKey& key, double lb, double ub, VarType type)
{
  const auto id = static_cast<std::int32_t>(vars_.size());
  if (!index_.emplace(key.packed(), id).second)
    throw ModelError("duplicate variable " + canonical_name(key));
  vars_.push_back(Variable{key, lb, ub, type});
  obj_coef_.push_back(0.0);
  return VarId{id};
}

std::optional<VarId> MilpModel::find(const VarKey& key) const
{
  const auto it = index_.find(key.packed());
  if (it == index_.end())
    return std::nullopt;
  return VarId{it->second};
}

VarId MilpModel::id(const VarKey& key) const
{
  const auto found = find(key);
  if (!found)
    throw ModelError("unregistered variable " + canonical_name(key));
  return *found;
}

void MilpModel::set_bounds(VarId id, double lb, double ub)
{
  auto& var = vars_.at(id.value);
  var.lb = lb;
  var.ub = ub;
}

void MilpModel::add_constraint(LinConstraint row)
{
  if (row.label.empty())
    throw ModelError("constraint without label");
  for (const auto& [coef, var] : row.lhs.terms)
  {
    if (var.value < 0 || static_cast<std::size_t>(var.value) >= vars_.size())
      throw ModelError("constraint " + row.label + " references an unknown variable");
  }
  row.lhs.canonicalize();
  row.rhs -= row.lhs.constant;
  row.lhs.constant = 0.0;
  if (!labels_.insert(row.label).second)
    throw ModelError("duplicate constraint label " + row.label);
  rows_.push_back(std::move(row));
}

void MilpModel::add_objective(double coefficient, VarId var)
{
  obj_coef_.at(var.value) += coefficient;
}

void MilpModel::add_objective_constant(double value) { obj_constant_ += value; }

LinTerm MilpModel::objective() const
{
  LinTerm term;
  term.constant = obj_constant_;
  for (std::size_t j = 0; j < obj_coef_.size(); ++j)
  {
    if (obj_coef_[j] != 0.0)
      term.add(obj_coef_[j], VarId{static_cast<std::int32_t>(j)});
  }
  return term;
}

std::size_t MilpModel::count(VarKind kind) const
{
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(),
    [kind](const Variable& v) { return v.key.kind == kind; }));
}

std::size_t MilpModel::binary_count() const
{
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(),
    [](const Variable& v) { return v.type == VarType::Binary; }));
}

std::size_t MilpModel::count_rows(std::string_view prefix) const
{
  return static_cast<std::size_t>(
    std::count_if(rows_.begin(), rows_.end(), [prefix](const LinConstraint& r) {
      return std::string_view(r.label).substr(0, prefix.size()) == prefix;
    }));
}

double MilpModel::evaluate_objective(const std::vector<double>& values) const
{
  double total = obj_constant_;
  for (std::size_t j = 0; j < obj_coef_.size(); ++j)
  {
    if (obj_coef_[j] != 0.0)
      total += obj_coef_[j] * values.at(j);
  }
  return total;
}

double MilpModel::evaluate_row(
  const LinConstraint& row, const std::vector<double>& values) const
{
  double total = row.lhs.constant;
  for (const auto& [coef, var] : row.lhs.terms)
    total += coef * values.at(var.value);
  return total;
}

std::string MilpModel::canonical_serialization() const
{
  std::string out = "formation-avoid model v1\n";
  out += "variables " + std::to_string(vars_.size()) + "\n";
  for (const auto& v : vars_)
  {
    out += canonical_name(v.key);
    out += v.type == VarType::Binary ? " B " : " C ";
    out += format_number(v.lb);
    out += ' ';
    out += format_number(v.ub);
    out += '\n';
  }
  out += "constraints " + std::to_string(rows_.size()) + "\n";
  for (const auto& row : rows_)
  {
    out += row.label;
    out += ':';
    for (const auto& [coef, var] : row.lhs.terms)
    {
      out += ' ';
      out += format_number(coef);
      out += ' ';
      out += canonical_name(vars_[var.value].key);
    }
    out += ' ';
    out += sense_text(row.sense);
    out += ' ';
    out += format_number(row.rhs);
    out += '\n';
  }
  out += "objective ";
  out += format_number(obj_constant_);
  for (std::size_t j = 0; j < obj_coef_.size(); ++j)
  {
    if (obj_coef_[j] == 0.0)
      continue;
    out += ' ';
    out += format_number(obj_coef_[j]);
    out += ' ';
    out += canonical_name(vars_[j].key);
  }
  out += '\n';
  return out;
}

} // namespace formation_avoid
