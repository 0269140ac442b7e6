#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arenareward/arena.hpp"
#include "arenareward/components.hpp"
#include "arenareward/error.hpp"

namespace arenareward {

/// Kinesthetic reward combination: geometric mean of |values|, positive only
/// when every value is strictly positive. A zero anywhere yields 0.
inline double krc_combine(std::span<const double> values) {
  if (values.empty()) throw ParameterError("krc_combine: empty sequence");
  bool all_positive = true;
  double log_sum = 0.0;
  bool any_zero = false;
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError("krc_combine: non-finite value");
    if (!(v > 0.0)) all_positive = false;
    if (v == 0.0) any_zero = true;
    log_sum += std::log(std::abs(v));
  }
  if (any_zero) return 0.0;
  const double n = static_cast<double>(values.size());
  // n == 1 must be the identity bit-for-bit; exp(log(x)) is not.
  const double magnitude = values.size() == 1 ? std::abs(values[0]) : std::exp(log_sum / n);
  return all_positive ? magnitude : -magnitude;
}

inline double krc_combine(std::initializer_list<double> values) {
  return krc_combine(std::span<const double>(values.begin(), values.size()));
}

// ---------------------------------------------------------------------------
// Reward trees

struct RewardNode {
  enum class Kind { Leaf, Linear, Krc };

  Kind kind = Kind::Leaf;
  std::string name;       // component name (leaf) or label (linear / krc)
  double weight = 1.0;    // multiplier applied by the parent linear node
  ParamMap params;        // leaf parameter overrides
  std::vector<RewardNode> children;
  BoundComponent bound;   // resolved when the leaf is built

  static RewardNode leaf(std::string component, double weight = 1.0, ParamMap params = {}) {
    RewardNode n;
    n.kind = Kind::Leaf;
    n.bound = bind_component(component, params);
    n.name = std::move(component);
    n.weight = weight;
    n.params = std::move(params);
    n.check_weight();
    return n;
  }
  static RewardNode linear(std::string label, double weight, std::vector<RewardNode> children) {
    RewardNode n;
    n.kind = Kind::Linear;
    n.name = std::move(label);
    n.weight = weight;
    n.children = std::move(children);
    n.check_weight();
    return n;
  }
  static RewardNode krc(std::string label, double weight, std::vector<RewardNode> children) {
    RewardNode n;
    n.kind = Kind::Krc;
    n.name = std::move(label);
    n.weight = weight;
    n.children = std::move(children);
    n.check_weight();
    if (n.children.empty()) throw SpecError("krc node '" + n.name + "' needs at least one child");
    for (const auto& c : n.children)
      if (c.weight != 1.0)
        throw SpecError("krc node '" + n.name + "': child '" + c.name +
                        "' has a weight; weighted KRC is not supported");
    return n;
  }

  double evaluate(const ComponentContext& ctx) const {
    switch (kind) {
      case Kind::Leaf: return bound(ctx);
      case Kind::Linear: {
        double sum = 0.0;
        for (const auto& c : children) sum += c.weight * c.evaluate(ctx);
        return sum;
      }
      case Kind::Krc: {
        std::vector<double> values;
        values.reserve(children.size());
        for (const auto& c : children) values.push_back(c.evaluate(ctx));
        return krc_combine(values);
      }
    }
    return 0.0;
  }

 private:
  void check_weight() const {
    if (!std::isfinite(weight)) throw SpecError("node '" + name + "' has a non-finite weight");
  }
};

/// Splits a root evaluation into weighted per-child terms. For a linear root
/// the entries are weight * child value keyed by child name; any other root
/// becomes a single entry. Entries always sum to the root value.
inline void evaluate_breakdown(const RewardNode& root, const ComponentContext& ctx, const std::string& prefix,
                               std::map<std::string, double>& out, double& total) {
  total = 0.0;
  if (root.kind != RewardNode::Kind::Linear) {
    total = root.evaluate(ctx);
    out[prefix + root.name] = total;
    return;
  }
  for (const auto& c : root.children) {
    std::string key = prefix + c.name;
    for (int dup = 2; out.count(key); ++dup) key = prefix + c.name + "#" + std::to_string(dup);
    const double term = c.weight * c.evaluate(ctx);
    out[key] = term;
    total += term;
  }
}

/// A complete reward definition: sparse event rewards R, a potential Φ whose
/// difference forms the shaping term, and the team-spirit mixing factor.
struct RewardSpec {
  std::string name;
  std::optional<RewardNode> reward;
  std::optional<RewardNode> potential;
  double shaping_gamma = 1.0;
  double team_spirit = 0.0;

  void validate() const {
    if (!std::isfinite(shaping_gamma)) throw SpecError("shaping_gamma must be finite");
    if (!(team_spirit >= 0.0 && team_spirit <= 1.0)) throw SpecError("team_spirit must lie in [0, 1]");
  }
};

inline double shaping_term(double potential_prev, double potential_now, double gamma) {
  return gamma * potential_now - potential_prev;
}

/// (1 - τ)·R'_i + τ·mean(own team) - mean(opponents), per player.
inline std::vector<double> distribute_team_spirit(std::span<const double> shaped, std::span<const Team> teams,
                                                  double tau) {
  if (shaped.size() != teams.size()) throw ParameterError("team spirit: rewards and teams differ in length");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("team spirit: tau must lie in [0, 1]");
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    const auto t = static_cast<std::size_t>(teams[i]);
    sum[t] += shaped[i];
    ++count[t];
  }
  if (count[0] == 0 || count[1] == 0) throw ParameterError("team spirit: both teams must be non-empty");
  const double mean[2] = {sum[0] / static_cast<double>(count[0]), sum[1] / static_cast<double>(count[1])};
  std::vector<double> out(shaped.size());
  for (std::size_t i = 0; i < shaped.size(); ++i) {
    const auto t = static_cast<std::size_t>(teams[i]);
    out[i] = (1.0 - tau) * shaped[i] + tau * mean[t] - mean[1 - t];
  }
  return out;
}

struct PlayerReward {
  double event_reward = 0.0;  // R
  double potential = 0.0;     // Φ(s)
  double shaping = 0.0;       // F
  double shaped = 0.0;        // R' = R + F
  double distributed = 0.0;   // team-spirit distributed R'
  std::map<std::string, double> breakdown;  // "reward/<name>" and "potential/<name>" terms

  bool operator==(const PlayerReward&) const = default;
};

struct ShapedRewardOutput {
  std::vector<PlayerReward> players;

  bool operator==(const ShapedRewardOutput&) const = default;
};

inline constexpr const char* kRewardPrefix = "reward/";
inline constexpr const char* kPotentialPrefix = "potential/";

/// Φ of one player; demolished cars are inactive and hold zero potential.
inline double player_potential(const RewardSpec& spec, const GameState& state, std::size_t player,
                               const ArenaConstants& arena, std::map<std::string, double>* breakdown = nullptr) {
  if (!spec.potential) return 0.0;
  if (state.players.at(player).demolished) {
    if (breakdown) {
      std::map<std::string, double> zeros;
      double ignored = 0.0;
      ComponentContext ctx{state, nullptr, {}, player, arena};
      evaluate_breakdown(*spec.potential, ctx, kPotentialPrefix, zeros, ignored);
      for (auto& [k, v] : zeros) (*breakdown)[k] = 0.0;
    }
    return 0.0;
  }
  ComponentContext ctx{state, nullptr, {}, player, arena};
  if (!breakdown) return spec.potential->evaluate(ctx);
  double total = 0.0;
  evaluate_breakdown(*spec.potential, ctx, kPotentialPrefix, *breakdown, total);
  return total;
}

inline void check_same_roster(const GameState& a, const GameState& b) {
  if (a.players.size() != b.players.size()) throw StateError("roster mismatch: player counts differ");
  for (std::size_t i = 0; i < a.players.size(); ++i)
    if (a.players[i].team != b.players[i].team)
      throw StateError("roster mismatch: player " + std::to_string(i) + " changed team");
}

/// One step of the shaped reward: R from the event tree, F = γΦ(s) - Φ(s_prev)
/// from the potential tree (0 when there is no previous state), R' = R + F,
/// then team-spirit distribution across both teams.
inline ShapedRewardOutput step_rewards(const RewardSpec& spec, const GameState* prev_state, const GameState& state,
                                       std::span<const EventFlags> events,
                                       const ArenaConstants& arena = default_arena()) {
  if (prev_state) check_same_roster(*prev_state, state);
  if (!events.empty() && events.size() != state.players.size())
    throw StateError("event flags must be given for every player");

  ShapedRewardOutput out;
  out.players.resize(state.players.size());
  std::vector<double> shaped(state.players.size());
  std::vector<Team> teams(state.players.size());
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    auto& pr = out.players[i];
    if (spec.reward) {
      ComponentContext ctx{state, prev_state, events, i, arena};
      evaluate_breakdown(*spec.reward, ctx, kRewardPrefix, pr.breakdown, pr.event_reward);
    }
    pr.potential = player_potential(spec, state, i, arena, &pr.breakdown);
    if (prev_state && spec.potential)
      pr.shaping = shaping_term(player_potential(spec, *prev_state, i, arena), pr.potential, spec.shaping_gamma);
    pr.shaped = pr.event_reward + pr.shaping;
    shaped[i] = pr.shaped;
    teams[i] = state.players[i].team;
  }
  const bool both_teams = state.count(Team::Blue) > 0 && state.count(Team::Orange) > 0;
  if (both_teams) {
    const auto dist = distribute_team_spirit(shaped, teams, spec.team_spirit);
    for (std::size_t i = 0; i < dist.size(); ++i) out.players[i].distributed = dist[i];
  } else {
    for (std::size_t i = 0; i < shaped.size(); ++i) out.players[i].distributed = shaped[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in definitions

/// Named KRC utilities plus every registry component. `offensive_potential`
/// and `distance_weighted_alignment` forward dispersion/density to their
/// player-to-ball distance child.
inline RewardNode make_named_node(const std::string& name, const ParamMap& params = {}, double weight = 1.0) {
  const auto distance_child = [&](double dispersion, double density) {
    ParamMap p{{"dispersion", dispersion}, {"density", density}};
    for (const auto& [k, v] : params) {
      if (k != "dispersion" && k != "density")
        throw SpecError("'" + name + "' has no parameter '" + k + "'");
      p[k] = v;
    }
    return RewardNode::leaf("player_to_ball_distance", 1.0, p);
  };
  if (name == "offensive_potential")
    return RewardNode::krc(name, weight,
                           {RewardNode::leaf("align_ball_to_goal"), distance_child(1.0, 1.1),
                            RewardNode::leaf("player_to_ball_velocity")});
  if (name == "distance_weighted_alignment")
    return RewardNode::krc(name, weight, {RewardNode::leaf("align_ball_to_goal"), distance_child(1.1, 1.0)});
  return RewardNode::leaf(name, weight, params);
}

inline RewardSpec lucy_skg_spec() {
  RewardSpec spec;
  spec.name = "lucy_skg";
  spec.shaping_gamma = 1.0;
  spec.team_spirit = 0.3;
  spec.reward = RewardNode::linear("reward", 1.0,
                                   {RewardNode::leaf("goal", 10.0), RewardNode::leaf("concede", -3.0),
                                    RewardNode::leaf("shot", 1.5),
                                    RewardNode::leaf("touch_ball_to_goal_acceleration", 0.25),
                                    RewardNode::leaf("touch", 0.05), RewardNode::leaf("demolish", 2.0),
                                    RewardNode::leaf("demolished", -2.0)});
  spec.potential = RewardNode::linear(
      "potential", 1.0,
      {RewardNode::leaf("ball_to_goal_distance_difference", 2.0, {{"off_dispersion", 0.6}, {"def_dispersion", 0.4}}),
       RewardNode::leaf("ball_to_goal_velocity", 0.8), RewardNode::leaf("save_boost", 0.5),
       make_named_node("distance_weighted_alignment", {{"dispersion", 1.1}}, 0.6),
       make_named_node("offensive_potential", {{"density", 1.1}}, 1.0)});
  return spec;
}

inline RewardSpec aux_ablation_spec() {
  RewardSpec spec;
  spec.name = "aux_ablation";
  spec.shaping_gamma = 1.0;
  spec.team_spirit = 0.0;
  spec.reward = RewardNode::linear(
      "reward", 1.0,
      {RewardNode::leaf("player_to_ball_velocity", 0.1), RewardNode::leaf("ball_to_goal_velocity", 1.0),
       RewardNode::leaf("team_goal", 100.0), RewardNode::leaf("concede", -100.0), RewardNode::leaf("save", 30.0),
       RewardNode::leaf("shot", 30.0), RewardNode::leaf("demolish", 10.0)});
  return spec;
}

}  // namespace arenareward
