#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "arenareward/arenareward.hpp"

namespace testutil {

namespace ar = arenareward;

inline std::filesystem::path source_dir() { return ARENAREWARD_SOURCE_DIR; }
inline std::filesystem::path data_path(const std::string& name) { return source_dir() / "data" / name; }
inline std::filesystem::path config_path(const std::string& name) { return source_dir() / "configs" / name; }

inline ar::Vec3 random_vec(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

// Random in-bounds state with `blue` + `orange` cars; velocities below the caps.
inline ar::GameState random_state(std::mt19937_64& rng, std::size_t blue, std::size_t orange) {
  const auto& a = ar::default_arena();
  std::uniform_real_distribution<double> ux(-a.half_width_x + 100, a.half_width_x - 100);
  std::uniform_real_distribution<double> uy(-a.half_length_y + 100, a.half_length_y - 100);
  std::uniform_real_distribution<double> uz(a.ball_radius, a.ceiling_z - a.ball_radius);
  std::uniform_real_distribution<double> uv(-1200.0, 1200.0);
  std::uniform_real_distribution<double> uc(-1300.0, 1300.0);
  std::uniform_real_distribution<double> ub(0.0, 100.0);
  ar::GameState s;
  s.ball.position = {ux(rng), uy(rng), uz(rng)};
  s.ball.linear_velocity = {uv(rng) * 2, uv(rng) * 2, uv(rng)};
  for (std::size_t i = 0; i < blue + orange; ++i) {
    ar::PlayerState p;
    p.team = i < blue ? ar::Team::Blue : ar::Team::Orange;
    p.boost = ub(rng);
    p.body.position = {ux(rng), uy(rng), 17.0};
    p.body.linear_velocity = {uc(rng), uc(rng), 0.0};
    s.players.push_back(p);
  }
  return s;
}

inline ar::PlayerState car(ar::Team team, ar::Vec3 pos, ar::Vec3 vel = {}, double boost = 0.0) {
  ar::PlayerState p;
  p.team = team;
  p.boost = boost;
  p.body.position = pos;
  p.body.linear_velocity = vel;
  return p;
}

inline ar::GameState state_with(ar::Vec3 ball, std::vector<ar::PlayerState> players, ar::Vec3 ball_vel = {}) {
  ar::GameState s;
  s.ball.position = ball;
  s.ball.linear_velocity = ball_vel;
  s.players = std::move(players);
  return s;
}

}  // namespace testutil
