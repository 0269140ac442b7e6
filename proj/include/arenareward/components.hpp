#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/error.hpp"

namespace arenareward {

enum class EventKind { Touch, Goal, Concede, TeamGoal, Shot, Save, Demolish, Demolished };

inline constexpr EventKind kAllEventKinds[] = {EventKind::Touch,    EventKind::Goal,  EventKind::Concede,
                                               EventKind::TeamGoal, EventKind::Shot,  EventKind::Save,
                                               EventKind::Demolish, EventKind::Demolished};

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Touch: return "touch";
    case EventKind::Goal: return "goal";
    case EventKind::Concede: return "concede";
    case EventKind::TeamGoal: return "team_goal";
    case EventKind::Shot: return "shot";
    case EventKind::Save: return "save";
    case EventKind::Demolish: return "demolish";
    case EventKind::Demolished: return "demolished";
  }
  return "?";
}

struct EventFlags {
  bool touch = false;
  bool goal = false;
  bool concede = false;
  bool team_goal = false;
  bool shot = false;
  bool save = false;
  bool demolish = false;
  bool demolished = false;

  bool operator==(const EventFlags&) const = default;

  bool get(EventKind k) const {
    switch (k) {
      case EventKind::Touch: return touch;
      case EventKind::Goal: return goal;
      case EventKind::Concede: return concede;
      case EventKind::TeamGoal: return team_goal;
      case EventKind::Shot: return shot;
      case EventKind::Save: return save;
      case EventKind::Demolish: return demolish;
      case EventKind::Demolished: return demolished;
    }
    return false;
  }
  void set(EventKind k, bool v) {
    switch (k) {
      case EventKind::Touch: touch = v; break;
      case EventKind::Goal: goal = v; break;
      case EventKind::Concede: concede = v; break;
      case EventKind::TeamGoal: team_goal = v; break;
      case EventKind::Shot: shot = v; break;
      case EventKind::Save: save = v; break;
      case EventKind::Demolish: demolish = v; break;
      case EventKind::Demolished: demolished = v; break;
    }
  }
  void validate() const {
    if (goal && concede) throw StateError("event flags: goal and concede both set");
    if (shot && !touch) throw StateError("event flags: shot without touch");
  }
};

/// Everything a component may look at when scoring one player on one step.
/// A non-owning view; the referenced objects must outlive it.
struct ComponentContext {
  const GameState& state;
  const GameState* previous_state = nullptr;
  std::span<const EventFlags> events;  // one entry per player, or empty
  std::size_t player_index = 0;
  const ArenaConstants& arena = default_arena();

  const PlayerState& player() const { return state.players.at(player_index); }
  Team team() const { return player().team; }
  const EventFlags* player_events() const {
    return player_index < events.size() ? &events[player_index] : nullptr;
  }
};

/// Dispersion/density pair of the parameterized distance utility.
struct DistanceShape {
  double dispersion = 1.0;
  double density = 1.0;

  void validate() const {
    if (!(dispersion > 0.0) || !std::isfinite(dispersion))
      throw ParameterError("dispersion must be positive, got " + std::to_string(dispersion));
    if (!(density > 0.0) || !std::isfinite(density))
      throw ParameterError("density must be positive, got " + std::to_string(density));
  }
};

/// exp(-0.5 * d / (normalizer * dispersion)) ^ (1 / density)
inline double parameterized_distance(double distance, double normalizer, const DistanceShape& shape) {
  return std::pow(std::exp(-0.5 * distance / (normalizer * shape.dispersion)), 1.0 / shape.density);
}

// Cosine between the ball->target direction and the ball velocity, scaled by
// the ball speed cap. Written for `team`'s attacking net.
inline double ball_to_goal_velocity(const GameState& state, Team team, const ArenaConstants& arena) {
  const Vec3 to_target = arena.attack_target(team) - state.ball.position;
  const double dist = to_target.norm();
  if (dist == 0.0) return 0.0;
  return (to_target / dist).dot(state.ball.linear_velocity / arena.ball_max_speed);
}

inline double ball_to_goal_velocity(const ComponentContext& ctx) {
  return ball_to_goal_velocity(ctx.state, ctx.team(), ctx.arena);
}

inline double player_to_ball_velocity(const ComponentContext& ctx) {
  const auto& car = ctx.player().body;
  const Vec3 to_ball = object_distance(car, ctx.state.ball);
  const double dist = to_ball.norm();
  if (dist == 0.0) return 0.0;
  return (to_ball / dist).dot(car.linear_velocity / ctx.arena.car_max_speed);
}

inline double save_boost(const ComponentContext& ctx) { return std::sqrt(ctx.player().boost / 100.0); }

/// Surface gap between car and ball, passed through the parameterized
/// distance utility with the car speed cap as normalizer.
inline double player_to_ball_distance(const ComponentContext& ctx, const DistanceShape& shape) {
  shape.validate();
  const double gap =
      std::max(0.0, object_distance(ctx.player().body, ctx.state.ball).norm() - ctx.arena.ball_radius);
  return parameterized_distance(gap, ctx.arena.car_max_speed, shape);
}

/// Mean of two cosines against the player->ball direction: toward the net
/// being attacked from the ball, and away from the defended net. Depends only
/// on directions, so it is constant along any ray from the ball.
inline double align_ball_to_goal(const ComponentContext& ctx) {
  const Vec3& ball = ctx.state.ball.position;
  const Vec3 car_to_ball = ball - ctx.player().body.position;
  if (car_to_ball.squared_norm() == 0.0) return 0.0;
  const double offense = cosine(car_to_ball, ctx.arena.attack_target(ctx.team()) - ball);
  const double defense = cosine(car_to_ball, ball - ctx.arena.defend_target(ctx.team()));
  return 0.5 * offense + 0.5 * defense;
}

struct DistanceDifferenceParams {
  double off_weight = 1.0;
  DistanceShape off;
  double def_weight = 1.0;
  DistanceShape def;

  void validate() const {
    off.validate();
    def.validate();
    if (!std::isfinite(off_weight) || !std::isfinite(def_weight))
      throw ParameterError("distance difference weights must be finite");
  }
};

inline double ball_to_goal_distance_difference(const ComponentContext& ctx, const DistanceDifferenceParams& p) {
  p.validate();
  const Vec3& ball = ctx.state.ball.position;
  const auto term = [&](const Vec3& target, const DistanceShape& shape) {
    const double d = std::max(0.0, (target - ball).norm() - ctx.arena.goal_depth);
    return parameterized_distance(d, ctx.arena.ball_max_speed, shape);
  };
  return p.off_weight * term(ctx.arena.attack_target(ctx.team()), p.off) -
         p.def_weight * term(ctx.arena.defend_target(ctx.team()), p.def);
}

/// Change in ball-to-goal velocity across a step, paid only on a touch.
inline double touch_ball_to_goal_acceleration(const ComponentContext& ctx) {
  const EventFlags* ev = ctx.player_events();
  if (ev == nullptr || !ev->touch) return 0.0;
  if (ctx.previous_state == nullptr)
    throw StateError("touch_ball_to_goal_acceleration: touch without a previous state");
  return ball_to_goal_velocity(ctx.state, ctx.team(), ctx.arena) -
         ball_to_goal_velocity(*ctx.previous_state, ctx.team(), ctx.arena);
}

inline double event_reward(const ComponentContext& ctx, EventKind kind) {
  const EventFlags* ev = ctx.player_events();
  return (ev != nullptr && ev->get(kind)) ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Registry

using ParamMap = std::map<std::string, double>;
using BoundComponent = std::function<double(const ComponentContext&)>;

struct ComponentInfo {
  std::string name;
  ParamMap defaults;    // accepted parameter names and their default values
  bool event = false;   // indicator-driven (sparse) rather than a utility
  std::function<BoundComponent(const ParamMap&)> bind;
};

namespace detail {

inline ComponentInfo simple(std::string name, double (*fn)(const ComponentContext&), bool event = false) {
  return {std::move(name), {}, event, [fn](const ParamMap&) { return BoundComponent(fn); }};
}

inline ComponentInfo event_component(EventKind kind) {
  return {std::string(to_string(kind)), {}, true, [kind](const ParamMap&) {
            return BoundComponent([kind](const ComponentContext& ctx) { return event_reward(ctx, kind); });
          }};
}

inline std::map<std::string, ComponentInfo> build_registry() {
  std::map<std::string, ComponentInfo> reg;
  auto add = [&](ComponentInfo info) { reg.emplace(info.name, std::move(info)); };

  add(simple("ball_to_goal_velocity", [](const ComponentContext& c) { return ball_to_goal_velocity(c); }));
  add(simple("player_to_ball_velocity", &player_to_ball_velocity));
  add(simple("save_boost", &save_boost));
  add(simple("align_ball_to_goal", &align_ball_to_goal));
  add(simple("touch_ball_to_goal_acceleration", &touch_ball_to_goal_acceleration, true));

  add({"player_to_ball_distance", {{"dispersion", 1.0}, {"density", 1.0}}, false, [](const ParamMap& p) {
         DistanceShape shape{p.at("dispersion"), p.at("density")};
         shape.validate();
         return BoundComponent(
             [shape](const ComponentContext& ctx) { return player_to_ball_distance(ctx, shape); });
       }});

  add({"ball_to_goal_distance_difference",
       {{"off_weight", 1.0},
        {"off_dispersion", 1.0},
        {"off_density", 1.0},
        {"def_weight", 1.0},
        {"def_dispersion", 1.0},
        {"def_density", 1.0}},
       false,
       [](const ParamMap& p) {
         DistanceDifferenceParams params{p.at("off_weight"),
                                         {p.at("off_dispersion"), p.at("off_density")},
                                         p.at("def_weight"),
                                         {p.at("def_dispersion"), p.at("def_density")}};
         params.validate();
         return BoundComponent([params](const ComponentContext& ctx) {
           return ball_to_goal_distance_difference(ctx, params);
         });
       }});

  for (EventKind k : kAllEventKinds) add(event_component(k));
  return reg;
}

}  // namespace detail

inline const std::map<std::string, ComponentInfo>& component_registry() {
  static const std::map<std::string, ComponentInfo> reg = detail::build_registry();
  return reg;
}

inline bool is_component(const std::string& name) { return component_registry().count(name) != 0; }

/// Resolves a component name and its parameter overrides into a callable.
/// Unknown names and unknown parameter keys raise SpecError; out-of-domain
/// values raise ParameterError.
inline BoundComponent bind_component(const std::string& name, const ParamMap& overrides = {}) {
  const auto it = component_registry().find(name);
  if (it == component_registry().end()) throw SpecError("unknown reward component '" + name + "'");
  ParamMap params = it->second.defaults;
  for (const auto& [key, value] : overrides) {
    if (!params.count(key)) throw SpecError("component '" + name + "' has no parameter '" + key + "'");
    params[key] = value;
  }
  return it->second.bind(params);
}

}  // namespace arenareward
