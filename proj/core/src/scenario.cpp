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

#include <formation_avoid/scenario.hpp>

#include <json.hpp>

#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>

namespace formation_avoid {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what)
{
  throw ScenarioError(ScenarioError::Kind::Schema, path, what);
}

[[noreturn]] void physics_error(const std::string& path, const std::string& what)
{
  throw ScenarioError(ScenarioError::Kind::Physics, path, what);
}

std::string join(const std::string& parent, const std::string& key)
{
  return parent.empty() ? key : parent + "." + key;
}

std::string index(const std::string& parent, std::size_t i)
{
  return parent + "[" + std::to_string(i) + "]";
}

void require_object(const json& node, const std::string& path)
{
  if (!node.is_object())
    schema_error(path, "expected an object");
}

void reject_unknown(const json& node, const std::string& path,
  std::initializer_list<const char*> known)
{
  for (const auto& item : node.items())
  {
    bool found = false;
    for (const char* k : known)
      found = found || item.key() == k;
    if (!found)
      schema_error(join(path, item.key()), "unknown key");
  }
}

double read_number(const json& node, const std::string& path)
{
  if (!node.is_number())
    schema_error(path, "expected a number");
  const double value = node.get<double>();
  if (!std::isfinite(value))
    schema_error(path, "expected a finite number");
  return value;
}

std::size_t read_count(const json& node, const std::string& path)
{
  if (!node.is_number_integer())
    schema_error(path, "expected an integer");
  const auto value = node.get<std::int64_t>();
  if (value < 0)
    schema_error(path, "expected a non-negative integer");
  return static_cast<std::size_t>(value);
}

std::string read_string(const json& node, const std::string& path)
{
  if (!node.is_string())
    schema_error(path, "expected a string");
  return node.get<std::string>();
}

AxisTriple read_triple(const json& node, const std::string& path)
{
  if (!node.is_array() || node.size() != kAxes)
    schema_error(path, "expected an array of 3 numbers");
  AxisTriple t;
  for (std::size_t d = 0; d < kAxes; ++d)
    t[d] = read_number(node[d], index(path, d));
  return t;
}

std::vector<AxisTriple> read_triples(const json& node, const std::string& path)
{
  if (!node.is_array())
    schema_error(path, "expected an array");
  std::vector<AxisTriple> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(read_triple(node[i], index(path, i)));
  return out;
}

template<typename Fn>
void if_present(const json& node, const char* key, Fn&& fn)
{
  const auto it = node.find(key);
  if (it != node.end())
    fn(*it);
}

PerformanceEnvelope read_envelope(const json& node, const std::string& path)
{
  require_object(node, path);
  reject_unknown(node, path, {"v_lo", "v_hi", "u_lo", "u_hi"});
  PerformanceEnvelope env;
  if_present(node, "v_lo", [&](const json& v) {
    env.v_lo = read_triple(v, join(path, "v_lo"));
  });
  if_present(node, "v_hi", [&](const json& v) {
    env.v_hi = read_triple(v, join(path, "v_hi"));
  });
  if_present(node, "u_lo", [&](const json& v) {
    env.u_lo = read_triple(v, join(path, "u_lo"));
  });
  if_present(node, "u_hi", [&](const json& v) {
    env.u_hi = read_triple(v, join(path, "u_hi"));
  });
  return env;
}

WakeBox read_wake(const json& node, const std::string& path)
{
  require_object(node, path);
  reject_unknown(node, path,
    {"behind_len", "half_width", "below_depth", "above_height"});
  WakeBox box;
  if_present(node, "behind_len", [&](const json& v) {
    box.behind_len = read_number(v, join(path, "behind_len"));
  });
  if_present(node, "half_width", [&](const json& v) {
    box.half_width = read_number(v, join(path, "half_width"));
  });
  if_present(node, "below_depth", [&](const json& v) {
    box.below_depth = read_number(v, join(path, "below_depth"));
  });
  if_present(node, "above_height", [&](const json& v) {
    box.above_height = read_number(v, join(path, "above_height"));
  });
  return box;
}

SafetyParams read_safety(const json& node, const std::string& path)
{
  require_object(node, path);
  reject_unknown(node, path,
    {"formation_sep", "intruder_sep", "wake_box", "course_half_width",
      "formation_tol"});
  SafetyParams safety;
  if_present(node, "formation_sep", [&](const json& v) {
    safety.formation_sep = read_triple(v, join(path, "formation_sep"));
  });
  if_present(node, "intruder_sep", [&](const json& v) {
    safety.intruder_sep = read_triple(v, join(path, "intruder_sep"));
  });
  if_present(node, "wake_box", [&](const json& v) {
    safety.wake_box = read_wake(v, join(path, "wake_box"));
  });
  if_present(node, "course_half_width", [&](const json& v) {
    safety.course_half_width = read_number(v, join(path, "course_half_width"));
  });
  if_present(node, "formation_tol", [&](const json& v) {
    safety.formation_tol = read_triple(v, join(path, "formation_tol"));
  });
  return safety;
}

Weights read_weights(const json& node, const std::string& path)
{
  require_object(node, path);
  reject_unknown(node, path, {"w_g", "w_h", "w_k", "w_t"});
  Weights w;
  if_present(node, "w_g", [&](const json& v) {
    w.w_g = read_number(v, join(path, "w_g"));
  });
  if_present(node, "w_h", [&](const json& v) {
    w.w_h = read_number(v, join(path, "w_h"));
  });
  if_present(node, "w_k", [&](const json& v) {
    w.w_k = read_number(v, join(path, "w_k"));
  });
  if_present(node, "w_t", [&](const json& v) {
    w.w_t = read_number(v, join(path, "w_t"));
  });
  return w;
}

FormationSpec read_formation(const json& node, const std::string& path)
{
  require_object(node, path);
  reject_unknown(node, path,
    {"slot_offsets", "initial_positions", "initial_velocities"});
  FormationSpec f;
  if_present(node, "slot_offsets", [&](const json& v) {
    f.slot_offsets = read_triples(v, join(path, "slot_offsets"));
  });
  const std::size_t count = f.slot_offsets.size() + 1;

  const auto positions_it = node.find("initial_positions");
  if (positions_it != node.end())
  {
    f.initial_positions =
      read_triples(*positions_it, join(path, "initial_positions"));
    if (f.initial_positions.empty())
      physics_error(join(path, "initial_positions"),
        "formation needs at least one aircraft");
    if (f.initial_positions.size() != count)
      schema_error(join(path, "initial_positions"),
        "expected one entry per aircraft (slot_offsets + 1)");
  }
  else
  {
    f.initial_positions.push_back(AxisTriple{});
    for (const auto& offset : f.slot_offsets)
      f.initial_positions.push_back(offset);
  }

  const auto velocities_it = node.find("initial_velocities");
  if (velocities_it != node.end())
  {
    f.initial_velocities =
      read_triples(*velocities_it, join(path, "initial_velocities"));
    if (f.initial_velocities.size() != count)
      schema_error(join(path, "initial_velocities"),
        "expected one entry per aircraft (slot_offsets + 1)");
  }
  else
  {
    f.initial_velocities.assign(count, AxisTriple{750.0, 0.0, 0.0});
  }
  return f;
}

std::vector<Intruder> read_intruders(const json& node, const std::string& path)
{
  if (!node.is_array())
    schema_error(path, "expected an array");
  std::vector<Intruder> out;
  for (std::size_t r = 0; r < node.size(); ++r)
  {
    const std::string p = index(path, r);
    const json& item = node[r];
    require_object(item, p);
    reject_unknown(item, p, {"initial_position", "velocity"});
    if (!item.contains("initial_position"))
      schema_error(join(p, "initial_position"), "missing field");
    if (!item.contains("velocity"))
      schema_error(join(p, "velocity"), "missing field");
    out.push_back(Intruder{
      read_triple(item["initial_position"], join(p, "initial_position")),
      read_triple(item["velocity"], join(p, "velocity"))});
  }
  return out;
}

json triple_json(const AxisTriple& t)
{
  return json::array({t[0], t[1], t[2]});
}

json triples_json(const std::vector<AxisTriple>& ts)
{
  json out = json::array();
  for (const auto& t : ts)
    out.push_back(triple_json(t));
  return out;
}

void check_positive(double value, const std::string& path)
{
  if (!(value > 0.0))
    physics_error(path, "must be > 0");
}

void check_positive(const AxisTriple& t, const std::string& path)
{
  for (std::size_t d = 0; d < kAxes; ++d)
    check_positive(t[d], index(path, d));
}

} // namespace

ScenarioError::ScenarioError(
  Kind kind, std::string field_path, const std::string& detail)
: std::runtime_error(
    std::string(kind == Kind::Schema ? "schema violation: " :
                                       "physics violation: ")
    + field_path + ": " + detail),
  kind_(kind),
  field_path_(std::move(field_path))
{
}

void check_scenario(const Scenario& s)
{
  if (!(s.dt > 0.0) || !std::isfinite(s.dt))
    physics_error("dt", "time step must be > 0");
  if (s.steps < s.terminal_window + 1)
    physics_error("steps", "must exceed terminal_window");
  for (std::size_t d = 0; d < kAxes; ++d)
    if (!std::isfinite(s.wind[d]))
      physics_error(index("wind", d), "must be finite");

  const auto& env = s.envelope;
  for (std::size_t d = 0; d < kAxes; ++d)
  {
    if (!(env.v_lo[d] <= env.v_hi[d]))
      physics_error(index("envelope.v_lo", d), "v_lo must be <= v_hi");
    if (env.u_lo[d] > 0.0)
      physics_error(index("envelope.u_lo", d), "must be <= 0");
    if (env.u_hi[d] < 0.0)
      physics_error(index("envelope.u_hi", d), "must be >= 0");
  }

  const auto& safety = s.safety;
  check_positive(safety.formation_sep, "safety.formation_sep");
  check_positive(safety.intruder_sep, "safety.intruder_sep");
  check_positive(safety.formation_tol, "safety.formation_tol");
  check_positive(safety.course_half_width, "safety.course_half_width");
  check_positive(safety.wake_box.behind_len, "safety.wake_box.behind_len");
  check_positive(safety.wake_box.half_width, "safety.wake_box.half_width");
  check_positive(safety.wake_box.below_depth, "safety.wake_box.below_depth");
  check_positive(safety.wake_box.above_height, "safety.wake_box.above_height");

  const auto& w = s.weights;
  if (w.w_g < 0.0)
    physics_error("weights.w_g", "must be >= 0");
  if (w.w_h < 0.0)
    physics_error("weights.w_h", "must be >= 0");
  if (w.w_k < 0.0)
    physics_error("weights.w_k", "must be >= 0");
  if (w.w_t < 0.0)
    physics_error("weights.w_t", "must be >= 0");

  const auto& f = s.formation;
  if (f.initial_positions.empty())
    physics_error("formation.initial_positions",
      "formation needs at least one aircraft");
  if (f.initial_positions.size() != f.slot_offsets.size() + 1)
    schema_error("formation.initial_positions",
      "expected one entry per aircraft (slot_offsets + 1)");
  if (f.initial_velocities.size() != f.initial_positions.size())
    schema_error("formation.initial_velocities",
      "expected one entry per aircraft (slot_offsets + 1)");

  std::set<std::array<double, kAxes>> seen{{0.0, 0.0, 0.0}};
  for (std::size_t i = 0; i < f.slot_offsets.size(); ++i)
  {
    if (!seen.insert(f.slot_offsets[i].values).second)
      physics_error(index("formation.slot_offsets", i),
        "slot offsets must be distinct and non-zero");
  }

  for (std::size_t p = 0; p < f.initial_velocities.size(); ++p)
  {
    const auto& v = f.initial_velocities[p];
    if (!(v == f.initial_velocities.front()))
      physics_error(index("formation.initial_velocities", p),
        "initial velocities must match across the formation");
    for (std::size_t d = 0; d < kAxes; ++d)
    {
      if (v[d] < env.v_lo[d] || v[d] > env.v_hi[d])
        physics_error(index(index("formation.initial_velocities", p), d),
          "initial velocity outside the performance envelope");
    }
  }
}

Scenario parse_scenario(std::string_view config_text)
{
  json root;
  try
  {
    root = json::parse(config_text.begin(), config_text.end());
  }
  catch (const json::parse_error& e)
  {
    schema_error("$", std::string("malformed JSON: ") + e.what());
  }
  require_object(root, "$");
  reject_unknown(root, "",
    {"description", "dt", "steps", "wind", "formation", "intruders",
      "envelope", "safety", "weights", "terminal_window"});

  Scenario s;
  if_present(root, "description", [&](const json& v) {
    s.description = read_string(v, "description");
  });
  if_present(root, "dt", [&](const json& v) { s.dt = read_number(v, "dt"); });
  if_present(root, "steps", [&](const json& v) {
    s.steps = read_count(v, "steps");
  });
  if_present(root, "wind", [&](const json& v) {
    s.wind = read_triple(v, "wind");
  });
  if (!root.contains("formation"))
    schema_error("formation", "missing field");
  s.formation = read_formation(root["formation"], "formation");
  if_present(root, "intruders", [&](const json& v) {
    s.intruders = read_intruders(v, "intruders");
  });
  if_present(root, "envelope", [&](const json& v) {
    s.envelope = read_envelope(v, "envelope");
  });
  if_present(root, "safety", [&](const json& v) {
    s.safety = read_safety(v, "safety");
  });
  if_present(root, "weights", [&](const json& v) {
    s.weights = read_weights(v, "weights");
  });
  if_present(root, "terminal_window", [&](const json& v) {
    s.terminal_window = read_count(v, "terminal_window");
  });

  check_scenario(s);
  return s;
}

std::string serialize_scenario(const Scenario& s)
{
  json root = json::object();
  root["description"] = s.description;
  root["dt"] = s.dt;
  root["steps"] = s.steps;
  root["wind"] = triple_json(s.wind);
  root["terminal_window"] = s.terminal_window;
  root["formation"] = {
    {"slot_offsets", triples_json(s.formation.slot_offsets)},
    {"initial_positions", triples_json(s.formation.initial_positions)},
    {"initial_velocities", triples_json(s.formation.initial_velocities)},
  };
  json intruders = json::array();
  for (const auto& r : s.intruders)
  {
    intruders.push_back({{"initial_position", triple_json(r.initial_position)},
      {"velocity", triple_json(r.velocity)}});
  }
  root["intruders"] = intruders;
  root["envelope"] = {
    {"v_lo", triple_json(s.envelope.v_lo)},
    {"v_hi", triple_json(s.envelope.v_hi)},
    {"u_lo", triple_json(s.envelope.u_lo)},
    {"u_hi", triple_json(s.envelope.u_hi)},
  };
  const auto& box = s.safety.wake_box;
  root["safety"] = {
    {"formation_sep", triple_json(s.safety.formation_sep)},
    {"intruder_sep", triple_json(s.safety.intruder_sep)},
    {"wake_box",
      {{"behind_len", box.behind_len}, {"half_width", box.half_width},
        {"below_depth", box.below_depth},
        {"above_height", box.above_height}}},
    {"course_half_width", s.safety.course_half_width},
    {"formation_tol", triple_json(s.safety.formation_tol)},
  };
  root["weights"] = {
    {"w_g", s.weights.w_g},
    {"w_h", s.weights.w_h},
    {"w_k", s.weights.w_k},
    {"w_t", s.weights.w_t},
  };
  return root.dump(2) + "\n";
}

} // namespace formation_avoid
