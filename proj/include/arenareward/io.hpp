#pragma once

// JSON (and CSV) forms of the data types. Schemas are described in
// docs/json_schemas.md.

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "arenareward/aux_objectives.hpp"
#include "arenareward/config.hpp"
#include "arenareward/field.hpp"
#include "arenareward/graph.hpp"
#include "arenareward/observation.hpp"
#include "arenareward/replay.hpp"
#include "arenareward/sim.hpp"

namespace arenareward {

// ---------------------------------------------------------------------------
// States

inline Json to_json(const PhysObject& o) {
  return {{"position", vec_to_json(o.position)},
          {"linear_velocity", vec_to_json(o.linear_velocity)},
          {"angular_velocity", vec_to_json(o.angular_velocity)},
          {"forward", vec_to_json(o.forward)},
          {"up", vec_to_json(o.up)}};
}

inline PhysObject phys_from_json(const Json& j) {
  PhysObject o;
  if (!j.is_object()) throw SchemaError("physics object must be an object");
  o.position = vec_from_json(j.at("position"), "position");
  if (j.contains("linear_velocity")) o.linear_velocity = vec_from_json(j["linear_velocity"], "linear_velocity");
  if (j.contains("angular_velocity")) o.angular_velocity = vec_from_json(j["angular_velocity"], "angular_velocity");
  if (j.contains("forward")) o.forward = vec_from_json(j["forward"], "forward");
  if (j.contains("up")) o.up = vec_from_json(j["up"], "up");
  return o;
}

inline Json to_json(const PlayerState& p) {
  return {{"team", std::string(to_string(p.team))}, {"boost", p.boost},         {"on_ground", p.on_ground},
          {"has_flip", p.has_flip},                 {"demolished", p.demolished}, {"body", to_json(p.body)}};
}

inline PlayerState player_from_json(const Json& j) {
  PlayerState p;
  p.team = team_from_string(j.at("team").get<std::string>());
  p.boost = j.value("boost", 0.0);
  p.on_ground = j.value("on_ground", true);
  p.has_flip = j.value("has_flip", true);
  p.demolished = j.value("demolished", false);
  p.body = phys_from_json(j.at("body"));
  return p;
}

inline Json to_json(const GameState& s) {
  Json players = Json::array();
  for (const auto& p : s.players) players.push_back(to_json(p));
  return {{"tick", s.tick}, {"ball", to_json(s.ball)}, {"players", players}};
}

inline GameState state_from_json(const Json& j) {
  try {
    GameState s;
    s.tick = j.value("tick", std::int64_t{0});
    s.ball = phys_from_json(j.at("ball"));
    for (const auto& p : j.at("players")) s.players.push_back(player_from_json(p));
    return s;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("game state JSON: ") + e.what());
  }
}

inline GameState load_state(const std::filesystem::path& path) {
  GameState s = state_from_json(load_document(path));
  validate_state(s);
  return s;
}

inline Json to_json(const ActionVector& a) {
  const auto arr = a.to_array();
  return Json(std::vector<double>(arr.begin(), arr.end()));
}

inline ActionVector action_from_json(const Json& j) {
  return ActionVector::from_array(j.get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Rewards

inline Json to_json(const EventFlags& e) {
  Json j = Json::object();
  for (EventKind k : kAllEventKinds) j[std::string(to_string(k))] = e.get(k);
  return j;
}

inline EventFlags events_from_json(const Json& j) {
  EventFlags e;
  for (EventKind k : kAllEventKinds) e.set(k, j.value(std::string(to_string(k)), false));
  return e;
}

inline Json to_json(const PlayerReward& p) {
  return {{"event_reward", p.event_reward}, {"potential", p.potential},     {"shaping", p.shaping},
          {"shaped", p.shaped},             {"distributed", p.distributed}, {"breakdown", p.breakdown}};
}

inline PlayerReward player_reward_from_json(const Json& j) {
  PlayerReward p;
  p.event_reward = j.at("event_reward").get<double>();
  p.potential = j.at("potential").get<double>();
  p.shaping = j.at("shaping").get<double>();
  p.shaped = j.at("shaped").get<double>();
  p.distributed = j.at("distributed").get<double>();
  p.breakdown = j.value("breakdown", std::map<std::string, double>{});
  return p;
}

inline Json to_json(const ShapedRewardOutput& o) {
  Json players = Json::array();
  for (const auto& p : o.players) players.push_back(to_json(p));
  return players;
}

inline Json to_json(const RewardTimeline& tl) {
  Json roster = Json::array();
  for (Team t : tl.roster) roster.push_back(std::string(to_string(t)));
  Json entries = Json::array();
  for (const auto& e : tl.entries) {
    Json events = Json::array();
    for (const auto& ev : e.events) events.push_back(to_json(ev));
    entries.push_back({{"frame", e.frame}, {"time", e.time}, {"events", events}, {"players", to_json(e.rewards)}});
  }
  return {{"spec", tl.spec_name}, {"n_skip", tl.n_skip}, {"roster", roster}, {"frames", entries}};
}

inline RewardTimeline timeline_from_json(const Json& j) {
  try {
    RewardTimeline tl;
    tl.spec_name = j.value("spec", std::string());
    tl.n_skip = j.value("n_skip", std::size_t{9});
    for (const auto& t : j.value("roster", Json::array())) tl.roster.push_back(team_from_string(t.get<std::string>()));
    for (const auto& f : j.at("frames")) {
      TimelineEntry e;
      e.frame = f.at("frame").get<std::int64_t>();
      e.time = f.value("time", 0.0);
      for (const auto& ev : f.value("events", Json::array())) e.events.push_back(events_from_json(ev));
      for (const auto& p : f.at("players")) e.rewards.players.push_back(player_reward_from_json(p));
      tl.entries.push_back(std::move(e));
    }
    return tl;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("timeline JSON: ") + e.what());
  }
}

/// One row per (frame, player): frame,time,player,team,R,phi,F,R',distributed
/// followed by every breakdown key.
inline std::string timeline_to_csv(const RewardTimeline& tl) {
  std::vector<std::string> keys;
  if (!tl.entries.empty() && !tl.entries.front().rewards.players.empty())
    for (const auto& [k, v] : tl.entries.front().rewards.players.front().breakdown) keys.push_back(k);
  std::ostringstream out;
  out << std::setprecision(17) << "frame,time,player,team,event_reward,potential,shaping,shaped,distributed";
  for (const auto& k : keys) out << ',' << k;
  out << '\n';
  for (const auto& e : tl.entries) {
    for (std::size_t i = 0; i < e.rewards.players.size(); ++i) {
      const auto& p = e.rewards.players[i];
      out << e.frame << ',' << e.time << ',' << i << ',' << (i < tl.roster.size() ? to_string(tl.roster[i]) : "")
          << ',' << p.event_reward << ',' << p.potential << ',' << p.shaping << ',' << p.shaped << ','
          << p.distributed;
      for (const auto& k : keys) {
        const auto it = p.breakdown.find(k);
        out << ',' << (it == p.breakdown.end() ? 0.0 : it->second);
      }
      out << '\n';
    }
  }
  return out.str();
}

inline Json to_json(const ClassBalance& b, double epsilon) {
  return {{"epsilon", epsilon},   {"samples", b.samples}, {"positive", b.positive},
          {"zero", b.zero}, {"negative", b.negative}};
}

// ---------------------------------------------------------------------------
// Episodes

inline Json to_json(const EpisodeResult& r) {
  Json steps = Json::array();
  for (std::size_t t = 0; t < r.steps(); ++t) {
    Json events = Json::array();
    for (const auto& e : r.events[t]) events.push_back(to_json(e));
    steps.push_back({{"step", t + 1}, {"state", to_json(r.states[t + 1])}, {"events", events},
                     {"rewards", to_json(r.rewards[t])}});
  }
  return {{"termination", std::string(to_string(r.termination))},
          {"steps", r.steps()},
          {"initial_state", to_json(r.states.front())},
          {"trajectory", steps}};
}

// ---------------------------------------------------------------------------
// Observations and graphs

inline Json to_json(const ObservationTriplet& t) {
  std::vector<int> mask;
  for (bool m : t.mask) mask.push_back(m ? 1 : 0);
  return {{"rows", t.rows()}, {"cols", t.cols()},      {"query", t.query},
          {"key_value", t.key_value}, {"mask", mask}, {"packed", t.packed}};
}

inline Json to_json(const AdjacencyMatrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.size; ++i) rows.push_back(m.row(i));
  return {{"variant", m.variant == SelfConnection::Unit ? "unit_self" : "normalized_self"},
          {"dispersion", m.shape.dispersion},
          {"density", m.shape.density},
          {"size", m.size},
          {"matrix", rows}};
}

inline KbmTable kbm_from_json(const Json& j) {
  KbmTable table;
  const auto targets = [](const Json& arr, const std::string& slot) {
    std::vector<ActionTarget> out;
    for (const auto& t : arr) {
      const auto target = action_target_from_string(t.get<std::string>());
      if (!target) throw SpecError("kbm slot '" + slot + "': unknown target '" + t.get<std::string>() + "'");
      out.push_back(*target);
    }
    return out;
  };
  for (const auto& s : j.at("slots")) {
    KbmSlot slot;
    slot.name = s.at("name").get<std::string>();
    slot.values = s.at("values").get<std::vector<double>>();
    if (slot.values.empty()) throw SpecError("kbm slot '" + slot.name + "' has no values");
    slot.ground = targets(s.at("ground"), slot.name);
    slot.air = targets(s.value("air", s.at("ground")), slot.name);
    table.slots.push_back(std::move(slot));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Field reports

inline Json to_json(const FieldScenario& s) {
  Json players = Json::array();
  for (const auto& p : s.players) players.push_back(to_json(p));
  return {{"ball", to_json(s.ball)}, {"players", players}, {"probe", to_json(s.probe)}};
}

inline FieldScenario scenario_from_json(const Json& j) {
  FieldScenario s;
  s.ball = phys_from_json(j.at("ball"));
  for (const auto& p : j.value("players", Json::array())) s.players.push_back(player_from_json(p));
  if (j.contains("probe")) s.probe = player_from_json(j.at("probe"));
  return s;
}

inline Json to_json(const FieldReport& r) {
  std::vector<double> xs, ys;
  for (const auto& p : r.grid.positions) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  Json annotations = Json::array();
  for (const auto& a : r.annotations)
    annotations.push_back({{"label", a.label},
                           {"position", vec_to_json(a.position)},
                           {"grid_index", a.grid_index},
                           {"value", a.value}});
  return {{"component", r.component},
          {"params", r.params},
          {"grid", {{"nx", r.grid.nx}, {"ny", r.grid.ny}, {"z", r.grid.z}, {"x", xs}, {"y", ys},
                    {"values", r.grid.values}}},
          {"scenario", to_json(r.scenario)},
          {"annotations", annotations}};
}

inline FieldReport field_report_from_json(const Json& j) {
  try {
    FieldReport r;
    r.component = j.at("component").get<std::string>();
    r.params = j.value("params", ParamMap{});
    const Json& g = j.at("grid");
    r.grid.nx = g.at("nx").get<std::size_t>();
    r.grid.ny = g.at("ny").get<std::size_t>();
    r.grid.z = g.at("z").get<double>();
    const auto xs = g.at("x").get<std::vector<double>>();
    const auto ys = g.at("y").get<std::vector<double>>();
    r.grid.values = g.at("values").get<std::vector<double>>();
    if (xs.size() != ys.size() || xs.size() != r.grid.values.size() || xs.size() != r.grid.nx * r.grid.ny)
      throw SchemaError("field report: grid arrays disagree in length");
    for (std::size_t i = 0; i < xs.size(); ++i) r.grid.positions.push_back({xs[i], ys[i], r.grid.z});
    r.scenario = scenario_from_json(j.at("scenario"));
    for (const auto& a : j.value("annotations", Json::array()))
      r.annotations.push_back({a.at("label").get<std::string>(), vec_from_json(a.at("position")),
                               a.at("grid_index").get<std::size_t>(), a.at("value").get<double>()});
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("field report JSON: ") + e.what());
  }
}

inline std::string export_field(const FieldReport& r, FieldFormat format) {
  switch (format) {
    case FieldFormat::Csv: return export_field_csv(r);
    case FieldFormat::Json: return to_json(r).dump(2) + "\n";
    case FieldFormat::Svg: return export_field_svg(r);
  }
  throw ParameterError("unknown field format");
}

}  // namespace arenareward
