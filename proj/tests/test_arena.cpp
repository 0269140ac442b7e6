#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace arenareward;
using testutil::car;

TEST(ObjectDistance, PointsFromFirstToSecond) {
  PhysObject a, b;
  b.position = {0, 100, 0};
  EXPECT_EQ(object_distance(a, b), (Vec3{0, 100, 0}));
  EXPECT_EQ(object_distance(a, a), (Vec3{0, 0, 0}));
  a.position = {1, 2, 3};
  b.position = {4, 6, 3};
  EXPECT_EQ(object_distance(a, b), (Vec3{3, 4, 0}));
  EXPECT_DOUBLE_EQ(object_distance(a, b).norm(), 5.0);
}

TEST(ObjectDistance, AntisymmetricOnRandomPairs) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    PhysObject a, b;
    a.position = testutil::random_vec(rng, -5000, 5000);
    b.position = testutil::random_vec(rng, -5000, 5000);
    EXPECT_EQ(object_distance(a, b), -object_distance(b, a));
  }
}

TEST(Mirror, ReflectsBallAndSwapsTeams) {
  auto s = testutil::state_with({0, 1000, 93}, {car(Team::Blue, {10, -20, 17}, {10, -20, 0})});
  s.players.push_back(car(Team::Orange, {0, 3000, 17}));
  const auto m = mirror_for_orange(s);
  EXPECT_EQ(m.ball.position, (Vec3{0, -1000, 93}));
  // Blue block [0] moves after the single Orange player.
  ASSERT_EQ(m.players.size(), 2u);
  EXPECT_EQ(m.players[0].team, Team::Blue);
  EXPECT_EQ(m.players[0].body.position, (Vec3{0, -3000, 17}));
  EXPECT_EQ(m.players[1].team, Team::Orange);
  EXPECT_EQ(m.players[1].body.linear_velocity, (Vec3{10, 20, 0}));
}

TEST(Mirror, InvolutionBitExact) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    auto s = testutil::random_state(rng, 1 + i % 3, 1 + (i / 3) % 3);
    s.ball.angular_velocity = testutil::random_vec(rng, -5, 5);
    EXPECT_EQ(mirror_for_orange(mirror_for_orange(s)), s);
  }
}

TEST(Mirror, AngularVelocityIsAxial) {
  GameState s;
  s.ball.angular_velocity = {1, 2, 3};
  EXPECT_EQ(mirror_for_orange(s).ball.angular_velocity, (Vec3{-1, 2, -3}));
}

TEST(Mirror, IndexMapping) {
  std::mt19937_64 rng(3);
  const auto s = testutil::random_state(rng, 3, 2);
  const auto m = mirror_for_orange(s);
  for (std::size_t i = 0; i < s.players.size(); ++i)
    EXPECT_EQ(m.players[mirrored_index(s, i)].boost, s.players[i].boost);
}

TEST(ValidateState, RejectsNonFinite) {
  auto s = testutil::state_with({0, 0, 93}, {car(Team::Blue, {0, 0, 17})});
  EXPECT_NO_THROW(validate_state(s));
  s.ball.linear_velocity.x = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_state(s), StateError);
}

TEST(ValidateState, RejectsOrangeBeforeBlue) {
  auto s = testutil::state_with({0, 0, 93}, {car(Team::Orange, {0, 0, 17}), car(Team::Blue, {0, 0, 17})});
  EXPECT_THROW(validate_state(s), StateError);
}

TEST(ValidateState, RejectsBoostOutOfRange) {
  auto s = testutil::state_with({0, 0, 93}, {car(Team::Blue, {0, 0, 17}, {}, 150.0)});
  EXPECT_THROW(validate_state(s), StateError);
}

TEST(Arena, SpeedCapsAreFixed) {
  ArenaConstants a;
  EXPECT_NO_THROW(a.validate());
  a.car_max_speed = 2000;
  EXPECT_THROW(a.validate(), ParameterError);
}

TEST(Arena, TargetsByTeam) {
  const auto& a = default_arena();
  EXPECT_EQ(a.attack_target(Team::Blue), (Vec3{0, 6000, 321}));
  EXPECT_EQ(a.defend_target(Team::Blue), (Vec3{0, -6000, 321}));
  EXPECT_EQ(a.attack_target(Team::Orange), a.defend_target(Team::Blue));
}

TEST(Cosine, ZeroVectorGivesZero) {
  EXPECT_EQ(cosine({0, 0, 0}, {1, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(cosine({2, 0, 0}, {-3, 0, 0}), -1.0);
}
