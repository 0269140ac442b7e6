#pragma once

// Config documents: TOML or JSON files, both surfaced as nlohmann::json so a
// single loader serves each schema.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "arenareward/arena.hpp"
#include "arenareward/composition.hpp"
#include "arenareward/error.hpp"

namespace arenareward {

using Json = nlohmann::json;

namespace detail {

inline Json toml_to_json(const toml::node& node) {
  if (const auto* tbl = node.as_table()) {
    Json obj = Json::object();
    for (const auto& [key, value] : *tbl) obj[std::string(key.str())] = toml_to_json(value);
    return obj;
  }
  if (const auto* arr = node.as_array()) {
    Json out = Json::array();
    for (const auto& value : *arr) out.push_back(toml_to_json(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  throw SpecError("unsupported TOML value (dates and times are not accepted)");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline Json parse_toml(const std::string& text, const std::string& source = "<toml>") {
  try {
    return detail::toml_to_json(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw SpecError(msg.str());
  }
}

/// Reads a .toml or .json file (decided by extension; anything other than
/// .toml is parsed as JSON).
inline Json load_document(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  if (path.extension() == ".toml") return parse_toml(text, path.string());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Arena section

inline Json vec_to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

inline Vec3 vec_from_json(const Json& j, const std::string& what = "vector") {
  if (!j.is_array() || j.size() != 3) throw SpecError(what + ": expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Json arena_to_json(const ArenaConstants& a) {
  return {{"half_width_x", a.half_width_x},
          {"half_length_y", a.half_length_y},
          {"ceiling_z", a.ceiling_z},
          {"goal_line_y", a.goal_line_y},
          {"goal_half_width", a.goal_half_width},
          {"goal_height", a.goal_height},
          {"goal_depth", a.goal_depth},
          {"back_net_blue", vec_to_json(a.back_net_blue)},
          {"back_net_orange", vec_to_json(a.back_net_orange)},
          {"goal_center_blue", vec_to_json(a.goal_center_blue)},
          {"goal_center_orange", vec_to_json(a.goal_center_orange)},
          {"ball_radius", a.ball_radius},
          {"car_max_speed", a.car_max_speed},
          {"ball_max_speed", a.ball_max_speed}};
}

/// Applies the keys present in `j` on top of `base`. Unknown keys are an error.
inline ArenaConstants arena_from_json(const Json& j, ArenaConstants base = {}) try {
  if (!j.is_object()) throw SpecError("[arena] must be a table");
  for (const auto& [key, value] : j.items()) {
    if (key == "half_width_x") base.half_width_x = value.get<double>();
    else if (key == "half_length_y") base.half_length_y = value.get<double>();
    else if (key == "ceiling_z") base.ceiling_z = value.get<double>();
    else if (key == "goal_line_y") base.goal_line_y = value.get<double>();
    else if (key == "goal_half_width") base.goal_half_width = value.get<double>();
    else if (key == "goal_height") base.goal_height = value.get<double>();
    else if (key == "goal_depth") base.goal_depth = value.get<double>();
    else if (key == "back_net_blue") base.back_net_blue = vec_from_json(value, key);
    else if (key == "back_net_orange") base.back_net_orange = vec_from_json(value, key);
    else if (key == "goal_center_blue") base.goal_center_blue = vec_from_json(value, key);
    else if (key == "goal_center_orange") base.goal_center_orange = vec_from_json(value, key);
    else if (key == "ball_radius") base.ball_radius = value.get<double>();
    else if (key == "car_max_speed") base.car_max_speed = value.get<double>();
    else if (key == "ball_max_speed") base.ball_max_speed = value.get<double>();
    else throw SpecError("[arena]: unknown key '" + key + "'");
  }
  base.validate();
  return base;
} catch (const Json::exception& e) {
  throw SpecError(std::string("[arena]: ") + e.what());
}

/// Arena constants from a config file's optional [arena] section.
inline ArenaConstants load_arena(const std::filesystem::path& path) {
  const Json doc = load_document(path);
  return doc.contains("arena") ? arena_from_json(doc.at("arena")) : ArenaConstants{};
}

// ---------------------------------------------------------------------------
// Reward specs

inline Json node_to_json(const RewardNode& n) {
  Json j;
  switch (n.kind) {
    case RewardNode::Kind::Leaf: j["type"] = "leaf"; break;
    case RewardNode::Kind::Linear: j["type"] = "linear"; break;
    case RewardNode::Kind::Krc: j["type"] = "krc"; break;
  }
  j["name"] = n.name;
  j["weight"] = n.weight;
  if (!n.params.empty()) j["params"] = n.params;
  if (n.kind != RewardNode::Kind::Leaf) {
    j["children"] = Json::array();
    for (const auto& c : n.children) j["children"].push_back(node_to_json(c));
  }
  return j;
}

inline RewardNode node_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path + ": node must be a table");
  for (const auto& [key, value] : j.items())
    if (key != "type" && key != "name" && key != "weight" && key != "params" && key != "children")
      throw SpecError(path + ": unknown node key '" + key + "'");
  const std::string type = j.value("type", std::string("leaf"));
  const double weight = j.value("weight", 1.0);
  const std::string name = j.value("name", type);
  if (type == "leaf") {
    if (!j.contains("name")) throw SpecError(path + ": leaf node needs a name");
    if (j.contains("children")) throw SpecError(path + ": leaf node cannot have children");
    ParamMap params;
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw SpecError(path + ": params must be a table");
      for (const auto& [k, v] : j.at("params").items()) {
        if (!v.is_number()) throw SpecError(path + ": parameter '" + k + "' must be numeric");
        params[k] = v.get<double>();
      }
    }
    try {
      return RewardNode::leaf(name, weight, params);
    } catch (const SpecError& e) {
      throw SpecError(path + ": " + e.what());
    }
  }
  if (type != "linear" && type != "krc") throw SpecError(path + ": unknown node type '" + type + "'");
  if (j.contains("params")) throw SpecError(path + ": only leaves take params");
  std::vector<RewardNode> children;
  if (j.contains("children")) {
    if (!j.at("children").is_array()) throw SpecError(path + ": children must be an array");
    std::size_t i = 0;
    for (const auto& c : j.at("children"))
      children.push_back(node_from_json(c, path + ".children[" + std::to_string(i++) + "]"));
  }
  return type == "linear" ? RewardNode::linear(name, weight, std::move(children))
                          : RewardNode::krc(name, weight, std::move(children));
}

inline Json spec_to_json(const RewardSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["shaping_gamma"] = spec.shaping_gamma;
  j["team_spirit"] = spec.team_spirit;
  if (spec.reward) j["reward"] = node_to_json(*spec.reward);
  if (spec.potential) j["potential"] = node_to_json(*spec.potential);
  return j;
}

inline RewardSpec spec_from_json(const Json& j) try {
  if (!j.is_object()) throw SpecError("reward spec must be a table");
  RewardSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") spec.name = value.get<std::string>();
    else if (key == "shaping_gamma") spec.shaping_gamma = value.get<double>();
    else if (key == "team_spirit") spec.team_spirit = value.get<double>();
    else if (key == "reward") spec.reward = node_from_json(value, "reward");
    else if (key == "potential") spec.potential = node_from_json(value, "potential");
    else if (key == "arena") continue;  // shared config files may carry an arena section
    else throw SpecError("reward spec: unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
} catch (const Json::exception& e) {
  throw SpecError(std::string("reward spec: ") + e.what());
}

inline RewardSpec load_spec(const std::filesystem::path& path) { return spec_from_json(load_document(path)); }

/// Structural equality (names, kinds, weights, params) of two specs.
inline bool same_structure(const RewardSpec& a, const RewardSpec& b) { return spec_to_json(a) == spec_to_json(b); }

}  // namespace arenareward
