#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace arenareward;
using testutil::car;
using testutil::state_with;

namespace {

GameState quiet_state() {
  return state_with({0, 0, 92.75}, {car(Team::Blue, {-2000, -3000, 17}), car(Team::Orange, {2000, 3000, 17})});
}

void expect_in_bounds(const GameState& s, const ArenaConstants& a) {
  EXPECT_LE(std::abs(s.ball.position.x), a.half_width_x);
  EXPECT_LE(std::abs(s.ball.position.y), a.half_length_y + a.goal_depth);
  EXPECT_GE(s.ball.position.z, a.ball_radius - 1e-9);
  EXPECT_LE(s.ball.position.z, a.ceiling_z);
  for (const auto& p : s.players) {
    EXPECT_LE(std::abs(p.body.position.x), a.half_width_x);
    EXPECT_LE(std::abs(p.body.position.y), a.half_length_y);
  }
}

}  // namespace

TEST(Sim, TimingConstants) {
  const SimConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.dt(), 8.0 / 120.0);
  EXPECT_DOUBLE_EQ(cfg.actions_per_second(), 15.0);
  EXPECT_EQ(cfg.steps_for_seconds(300), 4500u);
  EXPECT_EQ(cfg.steps_for_seconds(45), 675u);
  EXPECT_EQ(cfg.max_steps, 4500u);
  EXPECT_EQ(cfg.no_touch_steps, 675u);
}

TEST(Sim, IdleRestingIsFixedPoint) {
  const SimConfig cfg;
  const auto s = quiet_state();
  const std::vector<ActionVector> idle(2);
  auto next = step_physics(s, idle, cfg);
  next.tick = s.tick;
  EXPECT_EQ(next, s);
}

TEST(Sim, DroppedBallStaysOnAxis) {
  const SimConfig cfg;
  auto s = quiet_state();
  s.ball.position = {0, 0, 1000};
  const std::vector<ActionVector> idle(2);
  double z = s.ball.position.z;
  for (int i = 0; i < 5; ++i) {
    s = step_physics(s, idle, cfg);
    EXPECT_EQ(s.ball.position.x, 0.0);
    EXPECT_EQ(s.ball.position.y, 0.0);
    EXPECT_LT(s.ball.position.z, z);
    z = s.ball.position.z;
  }
}

TEST(Sim, BallBouncesAndSettles) {
  const SimConfig cfg;
  auto s = quiet_state();
  s.ball.position = {0, 0, 1000};
  const std::vector<ActionVector> idle(2);
  for (int i = 0; i < 600; ++i) s = step_physics(s, idle, cfg);
  EXPECT_NEAR(s.ball.position.z, cfg.arena.ball_radius, 1e-9);
  EXPECT_EQ(s.ball.linear_velocity.z, 0.0);
}

TEST(Sim, FullThrottleAcceleratesToCap) {
  const SimConfig cfg;
  auto s = state_with({0, 4000, 92.75}, {car(Team::Blue, {0, -5000, 17})});
  s.players[0].body.forward = {1, 0, 0};
  s.players[0].body.position = {-4000, -4000, 17};
  ActionVector go;
  go.throttle = 1;
  const std::vector<ActionVector> act{go};
  double speed = 0;
  bool capped = false;
  for (int i = 0; i < 200 && !capped; ++i) {
    s = step_physics(s, act, cfg);
    const double v = s.players[0].body.linear_velocity.norm();
    if (v >= 2300.0 - 1e-9) {
      capped = true;
    } else {
      EXPECT_GT(v, speed);
    }
    speed = v;
    if (s.players[0].body.position.x > 3000) s.players[0].body.position.x = -4000;
  }
  EXPECT_TRUE(capped);
  EXPECT_LE(speed, 2300.0);
}

TEST(Sim, ScriptedGoalEndsEpisode) {
  SimConfig cfg;
  auto s = quiet_state();
  s.ball.position = {0, 4170, 92.75};
  s.ball.linear_velocity = {0, 1500, 0};
  const auto r = run_episode(lucy_skg_spec(), s, idle_policy(), cfg);
  EXPECT_EQ(r.termination, Termination::Goal);
  EXPECT_EQ(r.steps(), 10u);
  EXPECT_TRUE(r.events.back()[0].team_goal);
  EXPECT_TRUE(r.events.back()[1].concede);
}

TEST(Sim, IdleEndsAtNoTouch) {
  const auto r = run_episode(lucy_skg_spec(), quiet_state(), idle_policy(), SimConfig{});
  EXPECT_EQ(r.termination, Termination::NoTouch);
  EXPECT_EQ(r.steps(), 675u);
  EXPECT_EQ(r.states.size(), 676u);
}

TEST(Sim, TimeCap) {
  SimConfig cfg;
  cfg.no_touch_steps = 1u << 30;
  const auto r = run_episode(lucy_skg_spec(), quiet_state(), idle_policy(), cfg);
  EXPECT_EQ(r.termination, Termination::TimeCap);
  EXPECT_EQ(r.steps(), 4500u);
}

TEST(Sim, DeterministicPerSeed) {
  SimConfig cfg;
  cfg.max_steps = 400;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto init = random_state_setter(seed, {2, 2}, StateKind::Random, cfg);
    const auto a = run_episode(lucy_skg_spec(), init, random_policy(seed), cfg);
    const auto b = run_episode(lucy_skg_spec(), init, random_policy(seed), cfg);
    EXPECT_EQ(a, b);
  }
  EXPECT_NE(random_state_setter(1, {2, 2}), random_state_setter(2, {2, 2}));
}

TEST(Sim, SpeedCapsAndBoundsHold) {
  SimConfig cfg;
  cfg.max_steps = 600;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto init = random_state_setter(seed, {2, 2}, seed % 2 ? StateKind::KickoffLike : StateKind::Random, cfg);
    const Policy policy = seed % 3 == 0 ? chase_ball_policy() : random_policy(seed);
    const auto r = run_episode(lucy_skg_spec(), init, policy, cfg);
    for (const auto& s : r.states) {
      EXPECT_LE(s.ball.linear_velocity.norm(), 6000.0 + 1e-9);
      for (const auto& p : s.players) EXPECT_LE(p.body.linear_velocity.norm(), 2300.0 + 1e-9);
      expect_in_bounds(s, cfg.arena);
    }
  }
}

TEST(Sim, ChasersTouchTheBall) {
  SimConfig cfg;
  cfg.max_steps = 900;
  const auto init = random_state_setter(4, {1, 1}, StateKind::KickoffLike, cfg);
  const auto r = run_episode(lucy_skg_spec(), init, chase_ball_policy(), cfg);
  bool touched = false;
  for (const auto& ev : r.events)
    for (const auto& f : ev) touched |= f.touch;
  EXPECT_TRUE(touched);
}

TEST(StateSetter, KickoffSymmetry) {
  const auto s = random_state_setter(9, {3, 3}, StateKind::KickoffLike);
  EXPECT_EQ(s.ball.position, (Vec3{0, 0, 92.75}));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& b = s.players[i].body.position;
    const auto& o = s.players[3 + i].body.position;
    EXPECT_EQ(o, (Vec3{b.x, -b.y, b.z}));
    EXPECT_EQ(s.players[i].team, Team::Blue);
    EXPECT_EQ(s.players[3 + i].team, Team::Orange);
  }
}

TEST(StateSetter, RandomStatesValid) {
  const SimConfig cfg;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto s = random_state_setter(seed, {1 + seed % 4, 1 + (seed / 4) % 4});
    ASSERT_NO_THROW(validate_state(s, cfg.arena)) << seed;
    ASSERT_EQ(s, random_state_setter(seed, {1 + seed % 4, 1 + (seed / 4) % 4}));
  }
}

TEST(Sim, DemolishedPlayerRespawns) {
  const SimConfig cfg;
  auto s = quiet_state();
  s.players[0].demolished = true;
  const std::vector<ActionVector> idle(2);
  const auto next = step_physics(s, idle, cfg);
  EXPECT_FALSE(next.players[0].demolished);
  EXPECT_EQ(next.players[0].boost, cfg.respawn_boost);
}

TEST(Sim, ActionCountMismatch) {
  EXPECT_THROW(step_physics(quiet_state(), std::vector<ActionVector>(1), SimConfig{}), StateError);
}
