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

#include <formation_avoid/lp_format.hpp>
#include <formation_avoid/number_format.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

namespace formation_avoid {

namespace {

constexpr std::size_t kWrapColumn = 120;

class LineWriter
{
public:
  explicit LineWriter(std::string& out) : out_(out) {}

  void start(std::string_view head)
  {
    out_ += head;
    column_ = head.size();
  }

  void token(std::string_view text)
  {
    if (column_ + 1 + text.size() > kWrapColumn)
    {
      out_ += "\n  ";
      column_ = 2;
    }
    else
    {
      out_ += ' ';
      ++column_;
    }
    out_ += text;
    column_ += text.size();
  }

  void end() { out_ += '\n'; }

private:
  std::string& out_;
  std::size_t column_ = 0;
};

void write_term(LineWriter& line, double coef, std::string_view name)
{
  std::string term = coef < 0 ? "- " : "+ ";
  term += format_number(std::abs(coef));
  term += ' ';
  term += name;
  line.token(term);
}

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
    [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_tokens(std::string_view line)
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      tokens.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

std::optional<Section> section_header(std::string_view line)
{
  const std::string l = lower(trim(line));
  if (l == "minimize" || l == "minimise" || l == "min" || l == "minimum")
    return Section::Objective;
  if (l == "maximize" || l == "maximise" || l == "max" || l == "maximum")
    throw LpFormatError("maximization is not supported");
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.")
    return Section::Constraints;
  if (l == "bounds" || l == "bound")
    return Section::Bounds;
  if (l == "binaries" || l == "binary" || l == "bin")
    return Section::Binaries;
  if (l == "generals" || l == "general" || l == "gen")
    return Section::Generals;
  if (l == "end")
    return Section::End;
  return std::nullopt;
}

std::optional<Sense> sense_token(std::string_view t)
{
  if (t == "<=" || t == "=<" || t == "<")
    return Sense::LessEqual;
  if (t == ">=" || t == "=>" || t == ">")
    return Sense::GreaterEqual;
  if (t == "=")
    return Sense::Equal;
  return std::nullopt;
}

struct ParsedTerm
{
  std::vector<std::pair<double, std::string>> terms;
  double constant = 0.0;
};

struct VarDecl
{
  double lb = 0.0;
  double ub = HUGE_VAL;
  bool explicit_bounds = false;
  bool binary = false;
};

class Reader
{
public:
  MilpModel read(std::string_view text);

private:
  // Parses terms from tokens[pos] until a sense token or the end.
  ParsedTerm parse_terms(const std::vector<std::string>& tokens, std::size_t& pos);
  void parse_objective(const std::vector<std::string>& tokens);
  void parse_constraints(const std::vector<std::string>& tokens);
  void parse_bound_line(const std::vector<std::string>& tokens);
  void declare(const std::string& name);

  std::vector<std::string> order_;
  std::vector<std::string> bound_order_;
  std::unordered_map<std::string, VarDecl> decls_;
  ParsedTerm objective_;
  struct Row
  {
    std::string label;
    ParsedTerm lhs;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows_;
};

void Reader::declare(const std::string& name)
{
  if (decls_.emplace(name, VarDecl{}).second)
    order_.push_back(name);
}

constexpr double kNoCoef = std::numeric_limits<double>::quiet_NaN();

ParsedTerm Reader::parse_terms(
  const std::vector<std::string>& tokens, std::size_t& pos)
{
  ParsedTerm out;
  double sign = 1.0;
  double coef = kNoCoef;
  auto flush_constant = [&] {
    if (!std::isnan(coef))
      out.constant += sign * coef;
    coef = kNoCoef;
    sign = 1.0;
  };
  for (; pos < tokens.size(); ++pos)
  {
    const std::string& t = tokens[pos];
    if (sense_token(t))
      break;
    if (t == "+" || t == "-")
    {
      flush_constant();
      sign = t == "-" ? -1.0 : 1.0;
      continue;
    }
    double value = 0.0;
    if (parse_number(t, value))
    {
      if (!std::isnan(coef))
        throw LpFormatError("two consecutive numbers near '" + t + "'");
      coef = value;
      continue;
    }
    declare(t);
    out.terms.emplace_back(sign * (std::isnan(coef) ? 1.0 : coef), t);
    coef = kNoCoef;
    sign = 1.0;
  }
  flush_constant();
  return out;
}

void Reader::parse_objective(const std::vector<std::string>& tokens)
{
  std::size_t pos = 0;
  if (!tokens.empty() && tokens.front().back() == ':')
    pos = 1;
  objective_ = parse_terms(tokens, pos);
  if (pos != tokens.size())
    throw LpFormatError("relational operator in the objective");
}

void Reader::parse_constraints(const std::vector<std::string>& tokens)
{
  std::size_t pos = 0;
  while (pos < tokens.size())
  {
    Row row;
    if (tokens[pos].back() == ':')
    {
      row.label = tokens[pos].substr(0, tokens[pos].size() - 1);
      ++pos;
    }
    else
    {
      row.label = "r" + std::to_string(rows_.size() + 1);
    }
    row.lhs = parse_terms(tokens, pos);
    if (pos >= tokens.size())
      throw LpFormatError("constraint " + row.label + " has no relational operator");
    row.sense = *sense_token(tokens[pos++]);
    double sign = 1.0;
    if (pos < tokens.size() && (tokens[pos] == "+" || tokens[pos] == "-"))
      sign = tokens[pos++] == "-" ? -1.0 : 1.0;
    if (pos >= tokens.size() || !parse_number(tokens[pos], row.rhs))
      throw LpFormatError("constraint " + row.label + " has no numeric right-hand side");
    row.rhs *= sign;
    ++pos;
    rows_.push_back(std::move(row));
  }
}

void Reader::parse_bound_line(const std::vector<std::string>& tokens)
{
  auto set = [&](const std::string& name, double lb, double ub) {
    declare(name);
    VarDecl& d = decls_[name];
    if (!d.explicit_bounds)
      bound_order_.push_back(name);
    d.lb = lb;
    d.ub = ub;
    d.explicit_bounds = true;
  };
  auto number = [](const std::string& t) {
    double v = 0.0;
    if (!parse_number(t, v))
      throw LpFormatError("bad number '" + t + "' in bounds");
    return v;
  };

  if (tokens.size() == 2 && lower(tokens[1]) == "free")
  {
    set(tokens[0], -HUGE_VAL, HUGE_VAL);
    return;
  }
  if (tokens.size() == 3)
  {
    const auto sense = sense_token(tokens[1]);
    if (!sense)
      throw LpFormatError("bad bound line near '" + tokens[1] + "'");
    double v = 0.0;
    const bool name_first = !parse_number(tokens[0], v);
    const std::string& name = name_first ? tokens[0] : tokens[2];
    const double value = number(name_first ? tokens[2] : tokens[0]);
    declare(name);
    VarDecl current = decls_[name];
    Sense s = *sense;
    if (!name_first && s != Sense::Equal)
      s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
    if (s == Sense::Equal)
      set(name, value, value);
    else if (s == Sense::LessEqual)
      set(name, current.lb, value);
    else
      set(name, value, current.ub);
    return;
  }
  if (tokens.size() == 5 && sense_token(tokens[1]) == Sense::LessEqual
    && sense_token(tokens[3]) == Sense::LessEqual)
  {
    set(tokens[2], number(tokens[0]), number(tokens[4]));
    return;
  }
  std::string joined;
  for (const auto& t : tokens)
    joined += t + ' ';
  throw LpFormatError("unsupported bound line: " + joined);
}

MilpModel Reader::read(std::string_view text)
{
  Section section = Section::None;
  std::vector<std::string> objective_tokens;
  std::vector<std::string> constraint_tokens;

  std::size_t start = 0;
  while (start <= text.size())
  {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos)
      stop = text.size();
    std::string_view line = text.substr(start, stop - start);
    start = stop + 1;
    if (const auto comment = line.find('\\'); comment != std::string_view::npos)
      line = line.substr(0, comment);
    if (trim(line).empty())
      continue;
    if (const auto header = section_header(line))
    {
      section = *header;
      if (section == Section::Generals)
        throw LpFormatError("general integer variables are not supported");
      continue;
    }
    const auto tokens = split_tokens(line);
    switch (section)
    {
      case Section::Objective:
        objective_tokens.insert(objective_tokens.end(), tokens.begin(), tokens.end());
        break;
      case Section::Constraints:
        constraint_tokens.insert(constraint_tokens.end(), tokens.begin(), tokens.end());
        break;
      case Section::Bounds:
        parse_bound_line(tokens);
        break;
      case Section::Binaries:
        for (const auto& name : tokens)
        {
          declare(name);
          decls_[name].binary = true;
        }
        break;
      case Section::None:
        throw LpFormatError("content before the objective section");
      case Section::Generals:
      case Section::End:
        break;
    }
    if (section == Section::End)
      break;
  }
  if (section != Section::End)
    throw LpFormatError("missing End section");

  parse_objective(objective_tokens);
  parse_constraints(constraint_tokens);

  std::vector<std::string> ordering = bound_order_;
  for (const auto& name : order_)
  {
    if (!decls_[name].explicit_bounds)
      ordering.push_back(name);
  }

  MilpModel model;
  std::unordered_map<std::string, VarId> ids;
  for (const auto& name : ordering)
  {
    const auto key = parse_canonical_name(name);
    if (!key)
      throw LpFormatError("unknown variable name '" + name + "'");
    const VarDecl& d = decls_[name];
    double lb = d.lb;
    double ub = d.ub;
    if (d.binary && !d.explicit_bounds)
      ub = 1.0;
    ids[name] = model.add_variable(
      *key, lb, ub, d.binary ? VarType::Binary : VarType::Continuous);
  }
  for (const auto& [coef, name] : objective_.terms)
    model.add_objective(coef, ids.at(name));
  model.add_objective_constant(objective_.constant);
  for (auto& row : rows_)
  {
    LinConstraint c;
    for (const auto& [coef, name] : row.lhs.terms)
      c.lhs.add(coef, ids.at(name));
    c.lhs.constant = row.lhs.constant;
    c.sense = row.sense;
    c.rhs = row.rhs;
    c.label = std::move(row.label);
    model.add_constraint(std::move(c));
  }
  return model;
}

} // namespace

std::string export_lp(const MilpModel& model)
{
  const auto& vars = model.variables();
  std::vector<std::string> names;
  names.reserve(vars.size());
  for (const auto& v : vars)
    names.push_back(canonical_name(v.key));

  std::string out = "\\ formation-avoid model\nMinimize\n";
  LineWriter line(out);
  line.start(" obj:");
  const LinTerm objective = model.objective();
  for (const auto& [coef, id] : objective.terms)
    write_term(line, coef, names[id.value]);
  if (objective.constant != 0.0 || objective.terms.empty())
  {
    if (!objective.terms.empty())
      line.token(objective.constant < 0 ? "-" : "+");
    line.token(format_number(
      objective.terms.empty() ? objective.constant : std::abs(objective.constant)));
  }
  line.end();

  out += "Subject To\n";
  for (const auto& row : model.constraints())
  {
    line.start(" " + row.label + ":");
    if (row.lhs.terms.empty())
      write_term(line, 0.0, names.front());
    for (const auto& [coef, id] : row.lhs.terms)
      write_term(line, coef, names[id.value]);
    line.token(row.sense == Sense::LessEqual ? "<="
        : row.sense == Sense::GreaterEqual   ? ">="
                                             : "=");
    line.token(format_number(row.rhs));
    line.end();
  }

  out += "Bounds\n";
  for (std::size_t j = 0; j < vars.size(); ++j)
  {
    const Variable& v = vars[j];
    out += ' ';
    if (v.lb == v.ub)
    {
      out += names[j] + " = " + format_number(v.lb);
    }
    else if (std::isinf(v.lb) && std::isinf(v.ub))
    {
      out += names[j] + " free";
    }
    else
    {
      out += format_number(v.lb) + " <= " + names[j] + " <= " + format_number(v.ub);
    }
    out += '\n';
  }

  const bool any_binary = std::any_of(vars.begin(), vars.end(),
    [](const Variable& v) { return v.type == VarType::Binary; });
  if (any_binary)
  {
    out += "Binaries\n";
    line.start("");
    for (std::size_t j = 0; j < vars.size(); ++j)
    {
      if (vars[j].type == VarType::Binary)
        line.token(names[j]);
    }
    line.end();
  }
  out += "End\n";
  return out;
}

MilpModel read_lp(std::string_view text)
{
  Reader reader;
  return reader.read(text);
}

} // namespace formation_avoid
