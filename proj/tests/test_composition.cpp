#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracle_values.hpp"
#include "test_util.hpp"

using namespace arenareward;
using testutil::car;
using testutil::state_with;

TEST(Krc, WorkedExamples) {
  EXPECT_DOUBLE_EQ(krc_combine({0.5, 0.5}), 0.5);
  EXPECT_DOUBLE_EQ(krc_combine({-0.5, 0.5}), -0.5);
  EXPECT_NEAR(krc_combine({0.9, 0.1}), oracle::kKrcNinetyTen, 1e-15);
  EXPECT_EQ(krc_combine({0.3, -0.7, 0.0}), 0.0);
  EXPECT_THROW(krc_combine(std::span<const double>{}), ParameterError);
}

TEST(Krc, SingleValueIdentity) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(krc_combine({x}), x);
  }
  EXPECT_EQ(krc_combine({0.0}), 0.0);
}

TEST(Krc, SignRuleBoundsAndPermutation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> n(2, 6);
  for (int i = 0; i < 20000; ++i) {
    std::vector<double> v(static_cast<std::size_t>(n(rng)));
    for (auto& x : v) x = u(rng);
    const double r = krc_combine(v);
    const bool all_pos = std::all_of(v.begin(), v.end(), [](double x) { return x > 0; });
    EXPECT_EQ(r > 0, all_pos);
    double lo = 1e300, hi = 0;
    for (double x : v) {
      lo = std::min(lo, std::abs(x));
      hi = std::max(hi, std::abs(x));
    }
    EXPECT_GE(std::abs(r), lo - 1e-12);
    EXPECT_LE(std::abs(r), hi + 1e-12);
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_NEAR(krc_combine(v), r, 1e-12);
  }
}

TEST(Krc, ZeroAbsorbs) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v{u(rng), u(rng), u(rng)};
    v[static_cast<std::size_t>(i % 3)] = 0.0;
    EXPECT_EQ(krc_combine(v), 0.0);
  }
}

TEST(RewardNode, SingleLeafUnchanged) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, 0, 17}, {}, 64)});
  const ComponentContext ctx{s, nullptr, {}, 0};
  EXPECT_EQ(RewardNode::leaf("save_boost").evaluate(ctx), 0.8);
}

TEST(RewardNode, OffensivePotentialIdeal) {
  // Car touching the ball from behind, at full speed straight through it.
  const auto s = state_with({0, 0, 321}, {car(Team::Blue, {0, -92.75, 321}, {0, 2300, 0})});
  const ComponentContext ctx{s, nullptr, {}, 0};
  EXPECT_NEAR(make_named_node("offensive_potential").evaluate(ctx), 1.0, 1e-15);
}

TEST(RewardNode, WeightedKrcChildRejected) {
  EXPECT_THROW(RewardNode::krc("k", 1.0, {RewardNode::leaf("save_boost", 2.0)}), SpecError);
  EXPECT_THROW(RewardNode::krc("k", 1.0, {}), SpecError);
  EXPECT_THROW(RewardNode::leaf("unknown_leaf"), SpecError);
  EXPECT_THROW(make_named_node("offensive_potential", {{"off_weight", 1.0}}), SpecError);
}

TEST(RewardNode, LinearIsWeightedSum) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -500, 17}, {0, 1000, 0}, 36)});
  const ComponentContext ctx{s, nullptr, {}, 0};
  const auto n = RewardNode::linear("sum", 1.0, {RewardNode::leaf("save_boost", 2.0),
                                                  RewardNode::leaf("player_to_ball_velocity", -3.0)});
  EXPECT_NEAR(n.evaluate(ctx), 2.0 * 0.6 - 3.0 * player_to_ball_velocity(ctx), 1e-15);
}

TEST(Shaping, Examples) {
  EXPECT_NEAR(shaping_term(0.4, 0.6, 1.0), 0.2, 1e-15);
  EXPECT_EQ(shaping_term(0.7, 0.7, 1.0), 0.0);
  EXPECT_NEAR(shaping_term(1.0, 1.0, 0.99), oracle::kShapingDiscounted, 1e-15);
}

TEST(TeamSpirit, WorkedExample) {
  const std::vector<double> r{1, 0, 0, 0};
  const std::vector<Team> t{Team::Blue, Team::Blue, Team::Orange, Team::Orange};
  const auto out = distribute_team_spirit(r, t, 0.3);
  EXPECT_NEAR(out[0], 0.85, 1e-15);
  EXPECT_NEAR(out[1], 0.15, 1e-15);
  EXPECT_NEAR(out[2], -0.5, 1e-15);
  EXPECT_NEAR(out[3], -0.5, 1e-15);
}

TEST(TeamSpirit, EqualRewardsCancel) {
  for (double tau : {0.0, 0.3, 1.0}) {
    const std::vector<double> r{0.7, 0.7, 0.7};
    const std::vector<Team> t{Team::Blue, Team::Orange, Team::Orange};
    for (double v : distribute_team_spirit(r, t, tau)) EXPECT_NEAR(v, 0.0, 1e-15);
  }
}

TEST(TeamSpirit, ZeroSumAndTauZero) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 3000; ++i) {
    const std::size_t per = 1 + static_cast<std::size_t>(i % 4);
    std::vector<double> r(2 * per);
    std::vector<Team> t(2 * per);
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = u(rng);
      t[k] = k < per ? Team::Blue : Team::Orange;
    }
    for (double tau : {0.0, 0.3, 1.0}) {
      const auto out = distribute_team_spirit(r, t, tau);
      EXPECT_NEAR(std::accumulate(out.begin(), out.end(), 0.0), 0.0, 1e-9);
    }
    const auto zero = distribute_team_spirit(r, t, 0.0);
    const double mean_o = std::accumulate(r.begin() + static_cast<std::ptrdiff_t>(per), r.end(), 0.0) / per;
    EXPECT_EQ(zero[0], r[0] - mean_o);
  }
}

TEST(TeamSpirit, Errors) {
  const std::vector<double> r{1, 2};
  EXPECT_THROW(distribute_team_spirit(r, std::vector<Team>{Team::Blue, Team::Blue}, 0.3), ParameterError);
  EXPECT_THROW(distribute_team_spirit(r, std::vector<Team>{Team::Blue, Team::Orange}, 1.5), ParameterError);
}

TEST(StepRewards, StaticStateIsZero) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -1000, 17}), car(Team::Orange, {0, 1000, 17})});
  const std::vector<EventFlags> ev(2);
  const auto out = step_rewards(lucy_skg_spec(), &s, s, ev);
  for (const auto& p : out.players) {
    EXPECT_EQ(p.event_reward, 0.0);
    EXPECT_EQ(p.shaping, 0.0);
    EXPECT_EQ(p.shaped, 0.0);
    EXPECT_EQ(p.distributed, 0.0);
  }
}

TEST(StepRewards, FirstStepHasNoShaping) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -1000, 17}, {}, 50), car(Team::Orange, {0, 1000, 17})});
  const auto out = step_rewards(lucy_skg_spec(), nullptr, s, {});
  EXPECT_NE(out.players[0].potential, 0.0);
  EXPECT_EQ(out.players[0].shaping, 0.0);
}

TEST(StepRewards, FixtureMatchesOracle) {
  const auto s = load_state(testutil::data_path("state_2v2.json"));
  const auto out = step_rewards(lucy_skg_spec(), nullptr, s, {});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.players[i].potential, oracle::kFixturePotential[i], 1e-12);
  // With no previous state R' = 0, so distribute the potentials explicitly.
  std::vector<double> phi(oracle::kFixturePotential, oracle::kFixturePotential + 4);
  std::vector<Team> teams{Team::Blue, Team::Blue, Team::Orange, Team::Orange};
  const auto dist = distribute_team_spirit(phi, teams, 0.3);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(dist[i], oracle::kFixtureDistributed[i], 1e-12);
}

TEST(StepRewards, BreakdownSumsToTotals) {
  std::mt19937_64 rng(14);
  const auto spec = lucy_skg_spec();
  for (int i = 0; i < 200; ++i) {
    const auto prev = testutil::random_state(rng, 2, 2);
    auto now = prev;
    now.ball.linear_velocity = testutil::random_vec(rng, -2000, 2000);
    std::vector<EventFlags> ev(4);
    ev[static_cast<std::size_t>(i % 4)].touch = true;
    ev[static_cast<std::size_t>(i % 4)].shot = i % 2 == 0;
    const auto out = step_rewards(spec, &prev, now, ev);
    for (const auto& p : out.players) {
      double r = 0, phi = 0;
      for (const auto& [k, v] : p.breakdown) (k.rfind(kRewardPrefix, 0) == 0 ? r : phi) += v;
      EXPECT_NEAR(r, p.event_reward, 1e-12);
      EXPECT_NEAR(phi, p.potential, 1e-12);
      EXPECT_NEAR(p.shaped, p.event_reward + p.shaping, 1e-15);
    }
  }
}

TEST(StepRewards, GoalEventWeights) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -1000, 17}), car(Team::Orange, {0, 1000, 17})});
  std::vector<EventFlags> ev(2);
  ev[0].goal = ev[0].team_goal = true;
  ev[1].concede = true;
  const auto out = step_rewards(lucy_skg_spec(), &s, s, ev);
  EXPECT_EQ(out.players[0].event_reward, 10.0);
  EXPECT_EQ(out.players[1].event_reward, -3.0);
}

TEST(StepRewards, RosterMismatch) {
  const auto a = state_with({0, 0, 93}, {car(Team::Blue, {0, 0, 17}), car(Team::Orange, {0, 0, 17})});
  const auto b = state_with({0, 0, 93}, {car(Team::Blue, {0, 0, 17})});
  EXPECT_THROW(step_rewards(lucy_skg_spec(), &a, b, {}), StateError);
}

TEST(StepRewards, DemolishedHoldsZeroPotential) {
  auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -1000, 17}, {}, 100), car(Team::Orange, {0, 1000, 17})});
  s.players[0].demolished = true;
  const auto out = step_rewards(lucy_skg_spec(), nullptr, s, {});
  EXPECT_EQ(out.players[0].potential, 0.0);
}

TEST(StepRewards, OneTeamSkipsDistribution) {
  const auto s = state_with({0, 0, 93}, {car(Team::Blue, {0, -1000, 17}, {0, 500, 0}, 40)});
  const auto prev = state_with({0, 0, 93}, {car(Team::Blue, {0, -1100, 17}, {0, 500, 0}, 40)});
  const auto out = step_rewards(lucy_skg_spec(), &prev, s, std::vector<EventFlags>(1));
  EXPECT_EQ(out.players[0].distributed, out.players[0].shaped);
}

TEST(BuiltinSpecs, LucyWeights) {
  const auto spec = lucy_skg_spec();
  EXPECT_EQ(spec.team_spirit, 0.3);
  EXPECT_EQ(spec.shaping_gamma, 1.0);
  ASSERT_TRUE(spec.reward && spec.potential);
  std::map<std::string, double> w;
  for (const auto& c : spec.reward->children) w[c.name] = c.weight;
  EXPECT_EQ(w, (std::map<std::string, double>{{"goal", 10},
                                                {"concede", -3},
                                                {"shot", 1.5},
                                                {"touch_ball_to_goal_acceleration", 0.25},
                                                {"touch", 0.05},
                                                {"demolish", 2},
                                                {"demolished", -2}}));
}

TEST(BuiltinSpecs, AuxAblationWeights) {
  const auto spec = aux_ablation_spec();
  std::map<std::string, double> w;
  for (const auto& c : spec.reward->children) w[c.name] = c.weight;
  EXPECT_EQ(w.at("player_to_ball_velocity"), 0.1);
  EXPECT_EQ(w.at("team_goal"), 100);
  EXPECT_EQ(w.at("concede"), -100);
  EXPECT_EQ(w.at("save"), 30);
  EXPECT_EQ(w.at("shot"), 30);
  EXPECT_EQ(w.at("demolish"), 10);
  EXPECT_FALSE(spec.potential.has_value());
}
