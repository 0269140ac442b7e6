#pragma once

// A small deterministic kinematic simulator. Cars are planar point masses
// with a heading; the ball is a ballistic sphere with restitution. It exists
// to drive the reward stack over plausible trajectories, nothing more.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/composition.hpp"
#include "arenareward/events.hpp"
#include "arenareward/observation.hpp"

namespace arenareward {

struct SimConfig {
  double physics_hz = 120.0;
  int frame_skip = 8;  // physics frames per action: 15 actions per second
  double gravity = 650.0;
  double restitution = 0.6;          // ball against walls / floor
  double touch_restitution = 0.6;    // ball against cars
  double car_accel = 1000.0;
  double boost_accel = 1600.0;
  double brake_accel = 3500.0;
  double coast_decel = 525.0;
  double boost_drain = 33.3;         // units per second
  double max_yaw_rate = 2.5;         // rad/s at full steer
  double turn_speed_ref = 500.0;     // speed below which steering weakens
  double car_hit_radius = 80.0;      // car treated as a sphere for ball contact
  double car_height = 17.0;
  double respawn_boost = 33.3;
  std::size_t max_steps = 4500;      // 5 minutes
  std::size_t no_touch_steps = 675;  // 45 seconds
  std::uint64_t seed = 0;
  EventRules rules;
  ArenaConstants arena;

  double dt() const { return static_cast<double>(frame_skip) / physics_hz; }
  double actions_per_second() const { return physics_hz / static_cast<double>(frame_skip); }
  std::size_t steps_for_seconds(double seconds) const {
    return static_cast<std::size_t>(std::llround(seconds * actions_per_second()));
  }
};

enum class Termination { Goal, TimeCap, NoTouch };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Goal: return "goal";
    case Termination::TimeCap: return "time_cap";
    case Termination::NoTouch: return "no_touch";
  }
  return "?";
}

struct EpisodeResult {
  std::vector<GameState> states;                 // initial state plus one per step
  std::vector<std::vector<EventFlags>> events;   // per step, per player
  std::vector<ShapedRewardOutput> rewards;       // per step
  Termination termination = Termination::TimeCap;

  std::size_t steps() const { return events.size(); }
  bool operator==(const EpisodeResult&) const = default;
};

namespace detail {

inline double heading_of(const Vec3& forward) { return std::atan2(forward.y, forward.x); }

inline Vec3 planar_forward(double yaw) { return {std::cos(yaw), std::sin(yaw), 0.0}; }

// Smallest t in (eps, limit] with p + v t - 0.5 g t^2 == target, moving in the
// direction `sign` (+1 upward crossing, -1 downward) at the crossing.
inline double ballistic_crossing(double p, double v, double g, double target, double sign, double limit) {
  constexpr double kEps = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  const auto consider = [&](double t) {
    if (t > kEps && t <= limit && (v - g * t) * sign > 0.0) best = std::min(best, t);
  };
  if (g == 0.0) {
    if (v != 0.0) consider((target - p) / v);
    return best;
  }
  // -0.5 g t^2 + v t + (p - target) = 0
  const double a = -0.5 * g;
  const double b = v;
  const double c = p - target;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return best;
  const double root = std::sqrt(disc);
  consider((-b + root) / (2.0 * a));
  consider((-b - root) / (2.0 * a));
  return best;
}

inline double linear_crossing(double p, double v, double target, double limit) {
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  const double t = (target - p) / v;
  return (t > 1e-9 && t <= limit) ? t : std::numeric_limits<double>::infinity();
}

inline void clamp_speed(Vec3& v, double cap) {
  const double s = v.norm();
  if (s > cap) v *= cap / s;
}

}  // namespace detail

/// Advances the ball by `dt` seconds: exact ballistic flight between
/// collisions with floor, ceiling, side walls, back walls (open inside the
/// goal mouth) and the goal back. A floor bounce slower than one step of
/// gravity puts the ball at rest on the floor.
inline PhysObject advance_ball(PhysObject ball, double dt, const SimConfig& cfg) {
  const ArenaConstants& a = cfg.arena;
  const double r = a.ball_radius;
  double remaining = dt;
  for (int iter = 0; iter < 32 && remaining > 0.0; ++iter) {
    Vec3& p = ball.position;
    Vec3& v = ball.linear_velocity;
    const bool resting = p.z <= r + 1e-9 && v.z == 0.0;
    const double g = resting ? 0.0 : cfg.gravity;

    enum class Wall { None, Floor, Ceiling, X, Y } wall = Wall::None;
    double t_hit = std::numeric_limits<double>::infinity();
    const auto take = [&](double t, Wall w) {
      if (t < t_hit) {
        t_hit = t;
        wall = w;
      }
    };
    if (!resting) take(detail::ballistic_crossing(p.z, v.z, g, r, -1.0, remaining), Wall::Floor);
    take(detail::ballistic_crossing(p.z, v.z, g, a.ceiling_z - r, +1.0, remaining), Wall::Ceiling);
    if (v.x != 0.0)
      take(detail::linear_crossing(p.x, v.x, (v.x > 0 ? 1.0 : -1.0) * (a.half_width_x - r), remaining), Wall::X);
    if (v.y != 0.0) {
      const double dir = v.y > 0 ? 1.0 : -1.0;
      const double field_wall = a.half_length_y - r;
      if (std::abs(p.y) < field_wall || p.y * dir < 0.0) {
        const double t = detail::linear_crossing(p.y, v.y, dir * field_wall, remaining);
        if (std::isfinite(t)) {
          const double x_at = p.x + v.x * t;
          const double z_at = p.z + v.z * t - 0.5 * g * t * t;
          const bool in_mouth = std::abs(x_at) < a.goal_half_width && z_at < a.goal_height;
          if (!in_mouth) take(t, Wall::Y);
        }
      }
      take(detail::linear_crossing(p.y, v.y, dir * (a.half_length_y + a.goal_depth - r), remaining), Wall::Y);
    }

    const double t = std::min(t_hit, remaining);
    p = p + v * t;
    p.z -= 0.5 * g * t * t;
    v.z -= g * t;
    remaining -= t;

    switch (wall) {
      case Wall::None: break;
      case Wall::Floor:
        p.z = r;
        v.z = -cfg.restitution * v.z;
        if (v.z < cfg.gravity * cfg.dt()) v.z = 0.0;
        break;
      case Wall::Ceiling:
        p.z = a.ceiling_z - r;
        v.z = -cfg.restitution * v.z;
        break;
      case Wall::X: v.x = -cfg.restitution * v.x; break;
      case Wall::Y: v.y = -cfg.restitution * v.y; break;
    }
    if (p.z < r) p.z = r;
  }
  return ball;
}

/// One action step (frame_skip physics frames). Players demolished in the
/// input respawn behind their own goal with respawn boost.
inline GameState step_physics(const GameState& state, std::span<const ActionVector> actions, const SimConfig& cfg) {
  if (actions.size() != state.players.size()) throw StateError("step_physics: one action per player required");
  const double dt = cfg.dt();
  const ArenaConstants& arena = cfg.arena;
  GameState next = state;
  next.tick = state.tick + 1;

  next.ball = advance_ball(state.ball, dt, cfg);

  for (std::size_t i = 0; i < next.players.size(); ++i) {
    PlayerState& p = next.players[i];
    if (p.demolished) {
      const double side = p.team == Team::Blue ? -1.0 : 1.0;
      p = PlayerState{};
      p.team = state.players[i].team;
      p.boost = cfg.respawn_boost;
      p.body.position = {0.0, side * (arena.half_length_y - 500.0), cfg.car_height};
      p.body.forward = {0.0, -side, 0.0};
      continue;
    }
    const ActionVector act = actions[i].clamped();
    double yaw = detail::heading_of(p.body.forward);
    double speed = p.body.linear_velocity.dot(detail::planar_forward(yaw));

    double accel = 0.0;
    if (act.boost && p.boost > 0.0) {
      accel = cfg.boost_accel;
      p.boost = std::max(0.0, p.boost - cfg.boost_drain * dt);
    } else if (act.throttle != 0.0) {
      accel = (speed * act.throttle < 0.0 ? cfg.brake_accel : cfg.car_accel) * act.throttle;
    }
    if (accel != 0.0) {
      speed += accel * dt;
    } else {
      const double decel = std::min(std::abs(speed), cfg.coast_decel * dt);
      speed -= std::copysign(decel, speed);
    }
    speed = std::clamp(speed, -arena.car_max_speed, arena.car_max_speed);

    const double grip = std::min(1.0, std::abs(speed) / cfg.turn_speed_ref);
    yaw += act.steer * cfg.max_yaw_rate * grip * (speed < 0.0 ? -1.0 : 1.0) * dt;
    const Vec3 fwd = detail::planar_forward(yaw);
    Vec3 pos = p.body.position + fwd * (speed * dt);
    if (std::abs(pos.x) > arena.half_width_x || std::abs(pos.y) > arena.half_length_y) {
      pos.x = std::clamp(pos.x, -arena.half_width_x, arena.half_width_x);
      pos.y = std::clamp(pos.y, -arena.half_length_y, arena.half_length_y);
      speed = 0.0;
    }
    pos.z = cfg.car_height;
    p.body.position = pos;
    p.body.forward = fwd;
    p.body.up = {0.0, 0.0, 1.0};
    p.body.linear_velocity = fwd * speed;
    p.body.angular_velocity = {0.0, 0.0, act.steer * cfg.max_yaw_rate * grip};
    p.on_ground = true;
  }

  // Demolitions: an opponent overlapping at supersonic speed.
  for (std::size_t a = 0; a < next.players.size(); ++a) {
    const PlayerState& att = next.players[a];
    if (att.demolished || state.players[a].demolished) continue;
    if (att.body.linear_velocity.norm() < cfg.rules.demolish_speed) continue;
    for (std::size_t v = 0; v < next.players.size(); ++v) {
      PlayerState& vic = next.players[v];
      if (vic.team == att.team || vic.demolished || state.players[v].demolished) continue;
      if ((vic.body.position - att.body.position).norm() < cfg.rules.demolish_radius) {
        vic.demolished = true;
        vic.body.linear_velocity = {};
        vic.body.angular_velocity = {};
      }
    }
  }

  // Car-ball contact at end-of-step positions.
  const double reach = arena.ball_radius + cfg.car_hit_radius;
  for (std::size_t i = 0; i < next.players.size(); ++i) {
    const PlayerState& p = next.players[i];
    if (p.demolished || state.players[i].demolished) continue;
    Vec3 delta = next.ball.position - p.body.position;
    const double dist = delta.norm();
    if (dist >= reach) continue;
    const Vec3 n = dist > 0.0 ? delta / dist : Vec3{0.0, 0.0, 1.0};
    next.ball.position = p.body.position + n * reach;
    next.ball.position.z = std::max(next.ball.position.z, arena.ball_radius);
    const double closing = (p.body.linear_velocity - next.ball.linear_velocity).dot(n);
    if (closing > 0.0) next.ball.linear_velocity += n * ((1.0 + cfg.touch_restitution) * closing);
  }
  // A push near a wall must not leave the ball outside the field.
  Vec3& bp = next.ball.position;
  const double r = arena.ball_radius;
  bp.x = std::clamp(bp.x, -arena.half_width_x + r, arena.half_width_x - r);
  bp.z = std::clamp(bp.z, r, arena.ceiling_z - r);
  const bool in_mouth = std::abs(bp.x) < arena.goal_half_width && bp.z < arena.goal_height;
  const double y_limit = in_mouth ? arena.half_length_y + arena.goal_depth - r : arena.half_length_y - r;
  if (std::abs(bp.y) > y_limit) bp.y = std::copysign(y_limit, bp.y);
  detail::clamp_speed(next.ball.linear_velocity, arena.ball_max_speed);
  return next;
}

inline std::vector<EventFlags> detect_events(const GameState& prev, const GameState& now, const SimConfig& cfg) {
  return infer_events(prev, now, cfg.dt(), cfg.arena, cfg.rules);
}

// ---------------------------------------------------------------------------
// Policies

/// Returns the action of `player` in `state` at step `step` (1-based).
using Policy = std::function<ActionVector(const GameState& state, std::size_t player, std::size_t step)>;

inline Policy idle_policy() {
  return [](const GameState&, std::size_t, std::size_t) { return ActionVector{}; };
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from a hash; bit-identical on every platform.
inline double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Uniformly random discrete keyboard/mouse actions, a pure function of
/// (seed, step, player).
inline Policy random_policy(std::uint64_t seed) {
  return [seed](const GameState& state, std::size_t player, std::size_t step) {
    std::uint64_t h = detail::splitmix64(seed ^ detail::splitmix64(step * 0x100000001b3ULL + player));
    static const KbmTable table = KbmTable::defaults();
    std::vector<int> raw;
    for (const auto& slot : table.slots) {
      h = detail::splitmix64(h);
      raw.push_back(static_cast<int>(detail::unit_from_hash(h) * static_cast<double>(slot.arity())));
    }
    return parse_kbm_actions(raw, table, state.players.at(player).on_ground);
  };
}

/// Drives at the ball, boosting when roughly aligned.
inline Policy chase_ball_policy() {
  return [](const GameState& state, std::size_t player, std::size_t) {
    const auto& car = state.players.at(player).body;
    Vec3 to_ball = state.ball.position - car.position;
    to_ball.z = 0.0;
    ActionVector a;
    a.throttle = 1.0;
    const double cross = car.forward.x * to_ball.y - car.forward.y * to_ball.x;
    const double c = cosine(car.forward, to_ball);
    a.steer = cross > 0.0 ? 1.0 : (cross < 0.0 ? -1.0 : 0.0);
    a.boost = c > 0.95;
    return a;
  };
}

// ---------------------------------------------------------------------------
// Episodes

inline EpisodeResult run_episode(const RewardSpec& spec, const GameState& initial, const Policy& policy,
                                 const SimConfig& cfg) {
  EpisodeResult result;
  result.states.push_back(initial);
  std::size_t since_touch = 0;
  std::vector<ActionVector> actions(initial.players.size());
  for (std::size_t step = 1;; ++step) {
    const GameState& prev = result.states.back();
    for (std::size_t i = 0; i < actions.size(); ++i) actions[i] = policy(prev, i, step);
    GameState next = step_physics(prev, actions, cfg);
    auto events = detect_events(prev, next, cfg);
    result.rewards.push_back(step_rewards(spec, &prev, next, events, cfg.arena));
    const bool touched = std::any_of(events.begin(), events.end(), [](const EventFlags& e) { return e.touch; });
    const bool goal = std::any_of(events.begin(), events.end(), [](const EventFlags& e) { return e.team_goal; });
    result.events.push_back(std::move(events));
    result.states.push_back(std::move(next));
    since_touch = touched ? 0 : since_touch + 1;
    if (goal) {
      result.termination = Termination::Goal;
      break;
    }
    if (since_touch >= cfg.no_touch_steps) {
      result.termination = Termination::NoTouch;
      break;
    }
    if (step >= cfg.max_steps) {
      result.termination = Termination::TimeCap;
      break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// State setters

struct Rosters {
  std::size_t blue = 1;
  std::size_t orange = 1;
};

enum class StateKind { Random, KickoffLike };

inline GameState random_state_setter(std::uint64_t seed, Rosters rosters, StateKind kind = StateKind::Random,
                                     const SimConfig& cfg = {}) {
  const ArenaConstants& a = cfg.arena;
  std::uint64_t h = detail::splitmix64(seed);
  const auto uniform = [&](double lo, double hi) {
    h = detail::splitmix64(h);
    return lo + (hi - lo) * detail::unit_from_hash(h);
  };
  GameState s;
  const auto make_car = [&](Team team, Vec3 pos, double yaw, double speed, double boost) {
    PlayerState p;
    p.team = team;
    p.boost = boost;
    p.body.position = pos;
    p.body.forward = detail::planar_forward(yaw);
    p.body.linear_velocity = p.body.forward * speed;
    return p;
  };

  if (kind == StateKind::Random) {
    const double r = a.ball_radius;
    s.ball.position = {uniform(-a.half_width_x + r, a.half_width_x - r),
                       uniform(-a.half_length_y + r, a.half_length_y - r), uniform(r, a.ceiling_z - r)};
    s.ball.linear_velocity = {uniform(-1000, 1000), uniform(-1000, 1000), uniform(-500, 500)};
    for (std::size_t n = 0; n < rosters.blue + rosters.orange; ++n) {
      const Team team = n < rosters.blue ? Team::Blue : Team::Orange;
      const Vec3 pos{uniform(-a.half_width_x, a.half_width_x), uniform(-a.half_length_y, a.half_length_y),
                     cfg.car_height};
      s.players.push_back(make_car(team, pos, uniform(-std::numbers::pi, std::numbers::pi),
                                   uniform(0.0, a.car_max_speed), uniform(0.0, 100.0)));
    }
    return s;
  }

  // Kickoff-like: standard spawn spots, shuffled per seed, Orange mirrored.
  std::vector<Vec3> spots{{-2048.0, -2560.0, cfg.car_height}, {2048.0, -2560.0, cfg.car_height},
                          {-256.0, -3840.0, cfg.car_height},  {256.0, -3840.0, cfg.car_height},
                          {0.0, -4608.0, cfg.car_height}};
  for (std::size_t i = spots.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform(0.0, static_cast<double>(i)));
    std::swap(spots[i - 1], spots[std::min(j, i - 1)]);
  }
  s.ball.position = {0.0, 0.0, a.ball_radius};
  const std::size_t n = std::max(rosters.blue, rosters.orange);
  std::vector<PlayerState> blue;
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 pos = spots[i % spots.size()];
    pos.x += static_cast<double>(i / spots.size()) * 200.0;
    const double yaw = std::atan2(-pos.y, -pos.x);
    blue.push_back(make_car(Team::Blue, pos, yaw, 0.0, 33.3));
  }
  for (std::size_t i = 0; i < rosters.blue; ++i) s.players.push_back(blue[i]);
  for (std::size_t i = 0; i < rosters.orange; ++i) {
    PlayerState p = blue[i];
    p.team = Team::Orange;
    p.body = detail::reflect(p.body);
    s.players.push_back(p);
  }
  return s;
}

}  // namespace arenareward
