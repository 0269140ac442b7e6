#pragma once

// Event inference from pairs of consecutive states. Shared by the simulator
// and the replay reader; the thresholds are heuristics, not game rules.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/components.hpp"

namespace arenareward {

struct EventRules {
  double touch_margin = 120.0;       // car centre within ball radius + margin
  double impulse_threshold = 50.0;   // unexplained ball velocity change, uu/s
  double gravity = 650.0;            // uu/s^2, used to discount free-fall velocity change
  double shot_speed = 500.0;         // post-touch speed toward the attacked net
  double save_horizon = 1.0;         // seconds of straight-line extrapolation
  double demolish_speed = 2200.0;    // attacker speed needed to demolish
  double demolish_radius = 160.0;    // centre distance counted as car overlap
};

inline bool ball_airborne(const PhysObject& ball, const ArenaConstants& arena) {
  // Fixtures round the resting height up (93 for 92.75), so allow a hair of slack.
  return ball.position.z > arena.ball_radius + 1.0 || ball.linear_velocity.z != 0.0;
}

/// Ball velocity change over `dt` seconds not accounted for by gravity.
inline double ball_velocity_discontinuity(const GameState& prev, const GameState& now, double dt,
                                          const ArenaConstants& arena, const EventRules& rules) {
  Vec3 predicted = prev.ball.linear_velocity;
  if (ball_airborne(prev.ball, arena)) predicted.z -= rules.gravity * dt;
  return (now.ball.linear_velocity - predicted).norm();
}

/// Team whose goal count increased: the ball centre crossed a goal line inside
/// the mouth during this step. Entering the Orange net (+y) scores for Blue.
inline std::optional<Team> goal_scored(const GameState& prev, const GameState& now, const ArenaConstants& arena) {
  const Vec3& p = now.ball.position;
  const bool in_mouth = std::abs(p.x) < arena.goal_half_width && p.z < arena.goal_height;
  if (!in_mouth) return std::nullopt;
  if (prev.ball.position.y <= arena.goal_line_y && p.y > arena.goal_line_y) return Team::Blue;
  if (prev.ball.position.y >= -arena.goal_line_y && p.y < -arena.goal_line_y) return Team::Orange;
  return std::nullopt;
}

inline std::vector<bool> infer_touches(const GameState& prev, const GameState& now, double dt,
                                       const ArenaConstants& arena, const EventRules& rules) {
  std::vector<bool> touched(now.players.size(), false);
  if (ball_velocity_discontinuity(prev, now, dt, arena, rules) <= rules.impulse_threshold) return touched;
  const double reach = arena.ball_radius + rules.touch_margin;
  for (std::size_t i = 0; i < now.players.size(); ++i) {
    const auto& p = now.players[i];
    touched[i] = !p.demolished && (now.ball.position - p.body.position).norm() < reach;
  }
  return touched;
}

/// Sets goal / team_goal for the scoring side and concede for the other.
inline void apply_goal(std::vector<EventFlags>& flags, const GameState& now, Team scorer) {
  for (std::size_t i = 0; i < now.players.size(); ++i) {
    if (now.players[i].team == scorer) {
      flags[i].goal = true;
      flags[i].team_goal = true;
    } else {
      flags[i].concede = true;
    }
  }
}

namespace detail {

// Does the straight-line path from `ball` cross the goal line defended by
// `team` inside the mouth within `horizon` seconds?
inline bool heading_into_own_goal(const PhysObject& ball, Team team, double horizon, const ArenaConstants& arena) {
  const double line = team == Team::Blue ? -arena.goal_line_y : arena.goal_line_y;
  const double vy = ball.linear_velocity.y;
  if (vy == 0.0) return false;
  const double t = (line - ball.position.y) / vy;
  if (t < 0.0 || t > horizon) return false;
  const Vec3 hit = ball.position + ball.linear_velocity * t;
  return std::abs(hit.x) < arena.goal_half_width && hit.z < arena.goal_height && hit.z >= 0.0;
}

}  // namespace detail

/// Full event inference: touch, goal/concede/team_goal, shot, save,
/// demolish/demolished.
inline std::vector<EventFlags> infer_events(const GameState& prev, const GameState& now, double dt,
                                            const ArenaConstants& arena, const EventRules& rules) {
  std::vector<EventFlags> flags(now.players.size());
  const auto touched = infer_touches(prev, now, dt, arena, rules);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!touched[i]) continue;
    const Team team = now.players[i].team;
    flags[i].touch = true;
    const Vec3 to_target = arena.attack_target(team) - now.ball.position;
    const double toward = to_target.norm() > 0.0 ? now.ball.linear_velocity.dot(to_target / to_target.norm()) : 0.0;
    flags[i].shot = toward > rules.shot_speed;
    flags[i].save = detail::heading_into_own_goal(prev.ball, team, rules.save_horizon, arena) &&
                    !detail::heading_into_own_goal(now.ball, team, rules.save_horizon, arena);
  }
  if (const auto scorer = goal_scored(prev, now, arena)) apply_goal(flags, now, *scorer);

  for (std::size_t v = 0; v < now.players.size(); ++v) {
    if (prev.players[v].demolished || !now.players[v].demolished) continue;
    flags[v].demolished = true;
    std::optional<std::size_t> attacker;
    double best = rules.demolish_radius;
    for (std::size_t a = 0; a < now.players.size(); ++a) {
      const auto& p = now.players[a];
      if (p.team == now.players[v].team || p.demolished) continue;
      if (p.body.linear_velocity.norm() < rules.demolish_speed) continue;
      const double d = (p.body.position - now.players[v].body.position).norm();
      if (d < best) {
        best = d;
        attacker = a;
      }
    }
    if (attacker) flags[*attacker].demolish = true;
  }
  return flags;
}

}  // namespace arenareward
