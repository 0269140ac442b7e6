#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/error.hpp"

namespace arenareward {

/// The eight controller inputs, in controller order.
struct ActionVector {
  double throttle = 0.0;
  double steer = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  double roll = 0.0;
  bool jump = false;
  bool boost = false;
  bool handbrake = false;

  static constexpr std::size_t kSize = 8;

  bool operator==(const ActionVector&) const = default;

  std::array<double, kSize> to_array() const {
    return {throttle, steer, pitch, yaw, roll, jump ? 1.0 : 0.0, boost ? 1.0 : 0.0, handbrake ? 1.0 : 0.0};
  }

  static ActionVector from_array(std::span<const double> v) {
    if (v.size() != kSize) throw ParameterError("action vector needs 8 entries");
    ActionVector a;
    a.throttle = v[0];
    a.steer = v[1];
    a.pitch = v[2];
    a.yaw = v[3];
    a.roll = v[4];
    a.jump = v[5] != 0.0;
    a.boost = v[6] != 0.0;
    a.handbrake = v[7] != 0.0;
    return a.clamped();
  }

  ActionVector clamped() const {
    ActionVector a = *this;
    for (double* c : {&a.throttle, &a.steer, &a.pitch, &a.yaw, &a.roll}) *c = std::clamp(*c, -1.0, 1.0);
    return a;
  }
};

// ---------------------------------------------------------------------------
// Row layout

struct FeatureSpan {
  std::string name;
  std::size_t start;  // 1-based, inclusive
  std::size_t end;    // 1-based, inclusive

  bool operator==(const FeatureSpan&) const = default;
};

// The previous-action span is printed as [24, 24 + 8k]: 8k action values
// followed by one reserved zero slot. The mask column comes last.
inline std::vector<FeatureSpan> observation_layout(std::size_t action_stack) {
  const std::size_t k8 = 8 * action_stack;
  return {{"object_flags", 1, 4},     {"position", 5, 7},   {"linear_velocity", 8, 10},
          {"forward", 11, 13},        {"up", 14, 16},       {"angular_velocity", 17, 19},
          {"boost", 20, 20},          {"on_ground_has_flip", 21, 22},
          {"demolished", 23, 23},     {"previous_actions", 24, 24 + k8},
          {"padding_mask", 25 + k8, 25 + k8}};
}

inline constexpr std::size_t row_length(std::size_t action_stack) { return 25 + 8 * action_stack; }

namespace obs_index {
inline constexpr std::size_t kMainPlayer = 0;
inline constexpr std::size_t kTeammate = 1;
inline constexpr std::size_t kOpponent = 2;
inline constexpr std::size_t kBall = 3;
inline constexpr std::size_t kPosition = 4;
inline constexpr std::size_t kVelocity = 7;
inline constexpr std::size_t kForward = 10;
inline constexpr std::size_t kUp = 13;
inline constexpr std::size_t kAngular = 16;
inline constexpr std::size_t kBoost = 19;
inline constexpr std::size_t kOnGround = 20;
inline constexpr std::size_t kHasFlip = 21;
inline constexpr std::size_t kDemolished = 22;
inline constexpr std::size_t kActions = 23;
}  // namespace obs_index

struct ObservationConfig {
  std::size_t action_stack = 5;
  // Number of key/value rows. Unset means exactly one row per object.
  std::optional<std::size_t> capacity;
  double position_scale = 2300.0;
  double velocity_scale = 2300.0;
  double angular_scale = 5.5;
  double boost_scale = 100.0;
};

struct ObservationTriplet {
  std::vector<double> query;                    // row_length - 1 features
  std::vector<std::vector<double>> key_value;   // one row per object slot
  std::vector<bool> mask;                       // true marks a padding row
  std::vector<std::vector<double>> packed;      // query row, then objects; mask in the last column

  std::size_t rows() const { return packed.size(); }
  std::size_t cols() const { return packed.empty() ? 0 : packed.front().size(); }
};

namespace detail {

inline void put(std::vector<double>& row, std::size_t at, const Vec3& v, double scale) {
  row[at] = v.x / scale;
  row[at + 1] = v.y / scale;
  row[at + 2] = v.z / scale;
}

inline std::vector<double> object_row(const PhysObject& body, std::size_t width, const ObservationConfig& cfg) {
  std::vector<double> row(width, 0.0);
  put(row, obs_index::kPosition, body.position, cfg.position_scale);
  put(row, obs_index::kVelocity, body.linear_velocity, cfg.velocity_scale);
  put(row, obs_index::kForward, body.forward, 1.0);
  put(row, obs_index::kUp, body.up, 1.0);
  put(row, obs_index::kAngular, body.angular_velocity, cfg.angular_scale);
  return row;
}

inline std::vector<double> player_row(const PlayerState& p, std::size_t flag, std::size_t width,
                                      const ObservationConfig& cfg) {
  auto row = object_row(p.body, width, cfg);
  row[flag] = 1.0;
  row[obs_index::kBoost] = p.boost / cfg.boost_scale;
  row[obs_index::kOnGround] = p.on_ground ? 1.0 : 0.0;
  row[obs_index::kHasFlip] = p.has_flip ? 1.0 : 0.0;
  row[obs_index::kDemolished] = p.demolished ? 1.0 : 0.0;
  return row;
}

}  // namespace detail

/// Builds the query / key-value / mask triplet for one player. The key/value
/// rows hold the ball followed by every car in roster order; boost pads and
/// timers are never encoded. `action_history` is oldest-first; the most recent
/// action lands in the first action slot of the query.
inline ObservationTriplet encode_observation(const GameState& state, std::size_t player_index,
                                             std::span<const ActionVector> action_history,
                                             const ObservationConfig& cfg = {}) {
  if (player_index >= state.players.size())
    throw ParameterError("player index " + std::to_string(player_index) + " out of range");
  const std::size_t width = row_length(cfg.action_stack) - 1;
  const std::size_t objects = 1 + state.players.size();
  const std::size_t capacity = cfg.capacity.value_or(objects);
  if (capacity < objects)
    throw ParameterError("observation capacity " + std::to_string(capacity) + " below object count " +
                         std::to_string(objects));

  const PlayerState& me = state.players[player_index];
  ObservationTriplet out;
  out.query = detail::player_row(me, obs_index::kMainPlayer, width, cfg);
  const std::size_t n_actions = std::min(cfg.action_stack, action_history.size());
  for (std::size_t a = 0; a < n_actions; ++a) {
    const auto values = action_history[action_history.size() - 1 - a].clamped().to_array();
    std::copy(values.begin(), values.end(), out.query.begin() + obs_index::kActions + a * ActionVector::kSize);
  }

  auto ball = detail::object_row(state.ball, width, cfg);
  ball[obs_index::kBall] = 1.0;
  out.key_value.push_back(std::move(ball));
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    const auto& p = state.players[i];
    const std::size_t flag = i == player_index   ? obs_index::kMainPlayer
                             : p.team == me.team ? obs_index::kTeammate
                                                 : obs_index::kOpponent;
    out.key_value.push_back(detail::player_row(p, flag, width, cfg));
  }
  out.mask.assign(objects, false);
  while (out.key_value.size() < capacity) {
    out.key_value.emplace_back(width, 0.0);
    out.mask.push_back(true);
  }

  out.packed.reserve(capacity + 1);
  out.packed.push_back(out.query);
  out.packed.back().push_back(0.0);
  for (std::size_t r = 0; r < capacity; ++r) {
    out.packed.push_back(out.key_value[r]);
    out.packed.back().push_back(out.mask[r] ? 1.0 : 0.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Keyboard/mouse discrete actions

enum class ActionTarget { Throttle, Steer, Pitch, Yaw, Roll, Jump, Boost, Handbrake };

inline std::optional<ActionTarget> action_target_from_string(const std::string& s) {
  static const std::pair<const char*, ActionTarget> names[] = {
      {"throttle", ActionTarget::Throttle}, {"steer", ActionTarget::Steer}, {"pitch", ActionTarget::Pitch},
      {"yaw", ActionTarget::Yaw},           {"roll", ActionTarget::Roll},   {"jump", ActionTarget::Jump},
      {"boost", ActionTarget::Boost},       {"handbrake", ActionTarget::Handbrake}};
  for (const auto& [n, t] : names)
    if (s == n) return t;
  return std::nullopt;
}

/// One discrete output slot: raw index r selects values[r], which is written
/// to every target listed for the current ground/air mode. Flag targets are
/// set when the selected value is non-zero.
struct KbmSlot {
  std::string name;
  std::vector<double> values;
  std::vector<ActionTarget> ground;
  std::vector<ActionTarget> air;

  std::size_t arity() const { return values.size(); }
};

struct KbmTable {
  std::vector<KbmSlot> slots;

  /// Arities (3, 3, 3, 2, 2): throttle/pitch, steer/yaw, roll, jump, boost.
  /// On the ground the roll slot drives the handbrake instead.
  static KbmTable defaults() {
    using T = ActionTarget;
    return {{{"throttle_pitch", {-1.0, 0.0, 1.0}, {T::Throttle}, {T::Throttle, T::Pitch}},
             {"steer_yaw", {-1.0, 0.0, 1.0}, {T::Steer}, {T::Steer, T::Yaw}},
             {"roll", {-1.0, 0.0, 1.0}, {T::Handbrake}, {T::Roll}},
             {"jump", {0.0, 1.0}, {T::Jump}, {T::Jump}},
             {"boost", {0.0, 1.0}, {T::Boost}, {T::Boost}}}};
  }
};

inline ActionVector parse_kbm_actions(std::span<const int> raw, const KbmTable& table = KbmTable::defaults(),
                                      bool on_ground = true) {
  if (raw.size() != table.slots.size())
    throw ParameterError("kbm: expected " + std::to_string(table.slots.size()) + " slots, got " +
                         std::to_string(raw.size()));
  ActionVector a;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    const auto& slot = table.slots[s];
    if (raw[s] < 0 || static_cast<std::size_t>(raw[s]) >= slot.arity())
      throw ParameterError("kbm: slot '" + slot.name + "' value " + std::to_string(raw[s]) + " outside arity " +
                           std::to_string(slot.arity()));
    const double v = slot.values[static_cast<std::size_t>(raw[s])];
    for (ActionTarget t : on_ground ? slot.ground : slot.air) {
      switch (t) {
        case ActionTarget::Throttle: a.throttle = v; break;
        case ActionTarget::Steer: a.steer = v; break;
        case ActionTarget::Pitch: a.pitch = v; break;
        case ActionTarget::Yaw: a.yaw = v; break;
        case ActionTarget::Roll: a.roll = v; break;
        case ActionTarget::Jump: a.jump = v != 0.0; break;
        case ActionTarget::Boost: a.boost = v != 0.0; break;
        case ActionTarget::Handbrake: a.handbrake = v != 0.0; break;
      }
    }
  }
  return a.clamped();
}

/// Inverse lookup: recovers the raw slot indices from the first target each
/// slot drives. Only exact for vectors produced by parse_kbm_actions with the
/// same table and mode.
inline std::vector<int> read_back_kbm(const ActionVector& a, const KbmTable& table = KbmTable::defaults(),
                                      bool on_ground = true) {
  const auto arr = a.to_array();
  std::vector<int> raw;
  for (const auto& slot : table.slots) {
    const auto& targets = on_ground ? slot.ground : slot.air;
    if (targets.empty()) throw ParameterError("kbm: slot '" + slot.name + "' drives nothing in this mode");
    const double v = arr[static_cast<std::size_t>(targets.front())];
    const bool flag = targets.front() >= ActionTarget::Jump;
    int found = -1;
    for (std::size_t r = 0; r < slot.arity() && found < 0; ++r) {
      const double candidate = slot.values[r];
      if (flag ? ((candidate != 0.0) == (v != 0.0)) : candidate == v) found = static_cast<int>(r);
    }
    if (found < 0) throw ParameterError("kbm: slot '" + slot.name + "' has no value matching the action");
    raw.push_back(found);
  }
  return raw;
}

}  // namespace arenareward
