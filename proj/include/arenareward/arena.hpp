#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arenareward/error.hpp"

namespace arenareward {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  constexpr double squared_norm() const { return dot(*this); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Cosine of the angle between a and b; 0 when either is the zero vector.
inline double cosine(const Vec3& a, const Vec3& b) {
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) return 0.0;
  return a.dot(b) / denom;
}

struct PhysObject {
  Vec3 position;
  Vec3 linear_velocity;
  Vec3 angular_velocity;
  Vec3 forward{1.0, 0.0, 0.0};
  Vec3 up{0.0, 0.0, 1.0};

  bool operator==(const PhysObject&) const = default;
};

enum class Team : std::uint8_t { Blue = 0, Orange = 1 };

inline constexpr Team opponent_of(Team t) { return t == Team::Blue ? Team::Orange : Team::Blue; }

inline std::string_view to_string(Team t) { return t == Team::Blue ? "blue" : "orange"; }

inline Team team_from_string(std::string_view s) {
  if (s == "blue" || s == "Blue" || s == "0") return Team::Blue;
  if (s == "orange" || s == "Orange" || s == "1") return Team::Orange;
  throw ParameterError("unknown team label '" + std::string(s) + "'");
}

struct PlayerState {
  PhysObject body;
  double boost = 0.0;  // [0, 100]
  Team team = Team::Blue;
  bool on_ground = true;
  bool has_flip = true;
  bool demolished = false;

  bool operator==(const PlayerState&) const = default;
};

struct GameState {
  PhysObject ball;
  std::vector<PlayerState> players;  // Blue block first, then Orange
  std::int64_t tick = 0;

  bool operator==(const GameState&) const = default;

  std::size_t count(Team t) const {
    std::size_t n = 0;
    for (const auto& p : players) n += (p.team == t);
    return n;
  }
  std::vector<std::size_t> indices_of(Team t) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < players.size(); ++i)
      if (players[i].team == t) out.push_back(i);
    return out;
  }
};

/// Field geometry and normalization constants. The two speed caps are the
/// normalizers of every velocity-based utility and must not be changed; the
/// remaining values describe a standard soccar field and can be overridden
/// from a config file.
struct ArenaConstants {
  double half_width_x = 4096.0;
  double half_length_y = 5120.0;
  double ceiling_z = 2044.0;
  double goal_line_y = 5120.0;
  double goal_half_width = 892.755;
  double goal_height = 642.775;
  double goal_depth = 880.0;
  Vec3 back_net_blue{0.0, -(5120.0 + 880.0), 321.0};
  Vec3 back_net_orange{0.0, 5120.0 + 880.0, 321.0};
  Vec3 goal_center_blue{0.0, -5120.0, 321.0};
  Vec3 goal_center_orange{0.0, 5120.0, 321.0};
  double ball_radius = 92.75;
  double car_max_speed = 2300.0;
  double ball_max_speed = 6000.0;

  bool operator==(const ArenaConstants&) const = default;

  // Back of the net a team attacks (p_target) / defends (p_blue_target for Blue).
  const Vec3& attack_target(Team t) const { return t == Team::Blue ? back_net_orange : back_net_blue; }
  const Vec3& defend_target(Team t) const { return t == Team::Blue ? back_net_blue : back_net_orange; }

  void validate() const {
    if (car_max_speed != 2300.0 || ball_max_speed != 6000.0)
      throw ParameterError("arena: car_max_speed must be 2300 and ball_max_speed 6000");
    if (!(goal_depth > 0.0)) throw ParameterError("arena: goal_depth must be positive");
    if (goal_line_y != half_length_y) throw ParameterError("arena: goal_line_y must equal half_length_y");
    if (!(half_width_x > 0.0 && half_length_y > 0.0 && ceiling_z > 0.0 && ball_radius > 0.0))
      throw ParameterError("arena: extents and ball radius must be positive");
  }
};

inline const ArenaConstants& default_arena() {
  static const ArenaConstants arena{};
  return arena;
}

/// d(a, b) = p_b - p_a.
inline Vec3 object_distance(const PhysObject& a, const PhysObject& b) { return b.position - a.position; }

namespace detail {

inline Vec3 reflect_y(const Vec3& v) { return {v.x, -v.y, v.z}; }

// Angular velocity is a pseudovector: under y -> -y it maps to (-wx, wy, -wz).
inline Vec3 reflect_y_axial(const Vec3& w) { return {-w.x, w.y, -w.z}; }

inline PhysObject reflect(const PhysObject& o) {
  return {reflect_y(o.position), reflect_y(o.linear_velocity), reflect_y_axial(o.angular_velocity),
          reflect_y(o.forward), reflect_y(o.up)};
}

}  // namespace detail

/// Index of player `index` after mirror_for_orange (the team blocks swap).
inline std::size_t mirrored_index(const GameState& state, std::size_t index) {
  const std::size_t n_blue = state.count(Team::Blue);
  const std::size_t n_orange = state.players.size() - n_blue;
  return index < n_blue ? index + n_orange : index - n_blue;
}

/// Reflects the field through y = 0 and swaps team labels, so that a reward
/// written from Blue's perspective can be evaluated for Orange. Applying it
/// twice returns the original state bit-exactly.
inline GameState mirror_for_orange(const GameState& state) {
  GameState out;
  out.tick = state.tick;
  out.ball = detail::reflect(state.ball);
  out.players.resize(state.players.size());
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    PlayerState p = state.players[i];
    p.body = detail::reflect(p.body);
    p.team = opponent_of(p.team);
    out.players[mirrored_index(state, i)] = p;
  }
  return out;
}

/// Throws StateError describing the first violated GameState invariant.
inline void validate_state(const GameState& state, const ArenaConstants& arena = default_arena()) {
  auto check_obj = [](const PhysObject& o, const std::string& who) {
    if (!o.position.finite() || !o.linear_velocity.finite() || !o.angular_velocity.finite() ||
        !o.forward.finite() || !o.up.finite())
      throw StateError(who + ": non-finite component");
    if (std::abs(o.forward.norm() - 1.0) > 1e-6 || std::abs(o.up.norm() - 1.0) > 1e-6)
      throw StateError(who + ": forward/up must be unit vectors");
    if (std::abs(o.forward.dot(o.up)) > 1e-6) throw StateError(who + ": forward and up not orthogonal");
  };
  check_obj(state.ball, "ball");
  bool seen_orange = false;
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    const auto& p = state.players[i];
    const std::string who = "player " + std::to_string(i);
    check_obj(p.body, who);
    if (!(p.boost >= 0.0 && p.boost <= 100.0)) throw StateError(who + ": boost outside [0, 100]");
    if (p.team == Team::Orange) seen_orange = true;
    if (p.team == Team::Blue && seen_orange) throw StateError("players must be grouped Blue first, then Orange");
  }
  const auto& b = state.ball.position;
  if (std::abs(b.x) > arena.half_width_x || std::abs(b.y) > arena.half_length_y + arena.goal_depth ||
      b.z < 0.0 || b.z > arena.ceiling_z)
    throw StateError("ball outside arena bounds");
}

}  // namespace arenareward
